#include "hfirst/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "hfirst/errors.hpp"
#include "hfirst/glyphs.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& key, const std::string& value, long long lo, long long hi) {
    long long v = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end || value.empty()) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    if (v < lo || v > hi) {
        throw ConfigError(key + ": value " + value + " out of range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end || value.empty()) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
    }
    return v;
}

double parse_dbl(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError(key + ": expected a boolean (0/1/true/false), got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ',';
        out += items[i];
    }
    return out;
}

struct KvEntry {
    const char* key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

std::uint8_t u8_of(const std::string& key, const std::string& value) {
    return static_cast<std::uint8_t>(parse_ll(key, value, 0, 255));
}

const std::vector<KvEntry>& kv_table() {
    static const std::vector<KvEntry> table = {
        {"geometry.width", [](const RunConfig& c) { return std::to_string(c.net.geometry.width); },
         [](RunConfig& c, const std::string& v) {
             c.net.geometry.width = static_cast<std::uint16_t>(parse_ll("geometry.width", v, 1, 0xFFFF));
         }},
        {"geometry.height", [](const RunConfig& c) { return std::to_string(c.net.geometry.height); },
         [](RunConfig& c, const std::string& v) {
             c.net.geometry.height = static_cast<std::uint16_t>(parse_ll("geometry.height", v, 1, 0xFFFF));
         }},
        {"gabor.lambda", [](const RunConfig& c) { return fmt_double(c.net.gabor.lambda); },
         [](RunConfig& c, const std::string& v) { c.net.gabor.lambda = parse_dbl("gabor.lambda", v); }},
        {"gabor.sigma", [](const RunConfig& c) { return fmt_double(c.net.gabor.sigma); },
         [](RunConfig& c, const std::string& v) { c.net.gabor.sigma = parse_dbl("gabor.sigma", v); }},
        {"gabor.gamma", [](const RunConfig& c) { return fmt_double(c.net.gabor.gamma); },
         [](RunConfig& c, const std::string& v) { c.net.gabor.gamma = parse_dbl("gabor.gamma", v); }},
        {"gabor.size", [](const RunConfig& c) { return std::to_string(c.net.gabor.size); },
         [](RunConfig& c, const std::string& v) {
             c.net.gabor.size = static_cast<int>(parse_ll("gabor.size", v, 3, 63));
         }},
        {"gabor.orientations", [](const RunConfig& c) { return std::to_string(c.net.gabor.orientations); },
         [](RunConfig& c, const std::string& v) {
             c.net.gabor.orientations = static_cast<int>(parse_ll("gabor.orientations", v, 1, 64));
         }},
        {"gabor.weight_scale", [](const RunConfig& c) { return std::to_string(c.net.gabor.weight_scale); },
         [](RunConfig& c, const std::string& v) {
             c.net.gabor.weight_scale = static_cast<int>(parse_ll("gabor.weight_scale", v, 1, 10000));
         }},
        {"s1.v_thresh", [](const RunConfig& c) { return std::to_string(c.net.s1.v_thresh); },
         [](RunConfig& c, const std::string& v) { c.net.s1.v_thresh = u8_of("s1.v_thresh", v); }},
        {"s1.leak", [](const RunConfig& c) { return std::to_string(c.net.s1.leak); },
         [](RunConfig& c, const std::string& v) { c.net.s1.leak = u8_of("s1.leak", v); }},
        {"s1.t_refr", [](const RunConfig& c) { return std::to_string(c.net.s1.t_refr); },
         [](RunConfig& c, const std::string& v) { c.net.s1.t_refr = u8_of("s1.t_refr", v); }},
        {"c1.v_thresh", [](const RunConfig& c) { return std::to_string(c.net.c1.v_thresh); },
         [](RunConfig& c, const std::string& v) { c.net.c1.v_thresh = u8_of("c1.v_thresh", v); }},
        {"c1.leak", [](const RunConfig& c) { return std::to_string(c.net.c1.leak); },
         [](RunConfig& c, const std::string& v) { c.net.c1.leak = u8_of("c1.leak", v); }},
        {"c1.t_refr", [](const RunConfig& c) { return std::to_string(c.net.c1.t_refr); },
         [](RunConfig& c, const std::string& v) { c.net.c1.t_refr = u8_of("c1.t_refr", v); }},
        {"s2.v_thresh", [](const RunConfig& c) { return std::to_string(c.net.s2_threshold); },
         [](RunConfig& c, const std::string& v) {
             c.net.s2_threshold = static_cast<int>(parse_ll("s2.v_thresh", v, 1, 255));
         }},
        {"s2.leak", [](const RunConfig& c) { return std::to_string(c.net.s2_leak); },
         [](RunConfig& c, const std::string& v) { c.net.s2_leak = u8_of("s2.leak", v); }},
        {"s2.t_refr", [](const RunConfig& c) { return std::to_string(c.net.s2_t_refr); },
         [](RunConfig& c, const std::string& v) { c.net.s2_t_refr = u8_of("s2.t_refr", v); }},
        {"c2.v_thresh", [](const RunConfig& c) { return std::to_string(c.net.c2.v_thresh); },
         [](RunConfig& c, const std::string& v) { c.net.c2.v_thresh = u8_of("c2.v_thresh", v); }},
        {"c2.leak", [](const RunConfig& c) { return std::to_string(c.net.c2.leak); },
         [](RunConfig& c, const std::string& v) { c.net.c2.leak = u8_of("c2.leak", v); }},
        {"c2.t_refr", [](const RunConfig& c) { return std::to_string(c.net.c2.t_refr); },
         [](RunConfig& c, const std::string& v) { c.net.c2.t_refr = u8_of("c2.t_refr", v); }},
        {"enable_c2", [](const RunConfig& c) { return std::to_string(int(c.net.enable_c2)); },
         [](RunConfig& c, const std::string& v) { c.net.enable_c2 = parse_bool("enable_c2", v); }},
        {"disable_c1_reset", [](const RunConfig& c) { return std::to_string(int(c.net.disable_c1_reset)); },
         [](RunConfig& c, const std::string& v) { c.net.disable_c1_reset = parse_bool("disable_c1_reset", v); }},
        {"disable_s2_reset", [](const RunConfig& c) { return std::to_string(int(c.net.disable_s2_reset)); },
         [](RunConfig& c, const std::string& v) { c.net.disable_s2_reset = parse_bool("disable_s2_reset", v); }},
        {"bypass_s1", [](const RunConfig& c) { return std::to_string(int(c.net.bypass_s1)); },
         [](RunConfig& c, const std::string& v) { c.net.bypass_s1 = parse_bool("bypass_s1", v); }},
        {"bypass_s1_c1", [](const RunConfig& c) { return std::to_string(int(c.net.bypass_s1_c1)); },
         [](RunConfig& c, const std::string& v) { c.net.bypass_s1_c1 = parse_bool("bypass_s1_c1", v); }},
        {"reset_clears_vm", [](const RunConfig& c) { return std::to_string(int(c.net.reset_clears_vm)); },
         [](RunConfig& c, const std::string& v) { c.net.reset_clears_vm = parse_bool("reset_clears_vm", v); }},
        {"polarity", [](const RunConfig& c) { return std::string(polarity_name(c.net.polarity)); },
         [](RunConfig& c, const std::string& v) { c.net.polarity = parse_polarity(v); }},
        {"training.alpha", [](const RunConfig& c) { return fmt_double(c.training.alpha); },
         [](RunConfig& c, const std::string& v) { c.training.alpha = parse_dbl("training.alpha", v); }},
        {"training.window", [](const RunConfig& c) { return std::to_string(c.training.window); },
         [](RunConfig& c, const std::string& v) {
             c.training.window = static_cast<int>(parse_ll("training.window", v, 4, 256));
         }},
        {"training.gap_ms", [](const RunConfig& c) { return fmt_double(c.training.gap_ms); },
         [](RunConfig& c, const std::string& v) { c.training.gap_ms = parse_dbl("training.gap_ms", v); }},
        {"data.labels", [](const RunConfig& c) { return join_list(c.data.labels); },
         [](RunConfig& c, const std::string& v) { c.data.labels = split_list(v); }},
        {"data.recordings_per_class", [](const RunConfig& c) { return std::to_string(c.data.recordings_per_class); },
         [](RunConfig& c, const std::string& v) {
             c.data.recordings_per_class = static_cast<int>(parse_ll("data.recordings_per_class", v, 1, 10000));
         }},
        {"data.glyph_scale", [](const RunConfig& c) { return std::to_string(c.data.glyph_scale); },
         [](RunConfig& c, const std::string& v) {
             c.data.glyph_scale = static_cast<int>(parse_ll("data.glyph_scale", v, 1, 64));
         }},
        {"data.ink", [](const RunConfig& c) { return fmt_double(c.data.ink); },
         [](RunConfig& c, const std::string& v) { c.data.ink = parse_dbl("data.ink", v); }},
        {"data.background", [](const RunConfig& c) { return fmt_double(c.data.background); },
         [](RunConfig& c, const std::string& v) { c.data.background = parse_dbl("data.background", v); }},
        {"data.contrast_threshold", [](const RunConfig& c) { return fmt_double(c.data.contrast_threshold); },
         [](RunConfig& c, const std::string& v) { c.data.contrast_threshold = parse_dbl("data.contrast_threshold", v); }},
        {"data.speed_px_per_ms", [](const RunConfig& c) { return fmt_double(c.data.speed_px_per_ms); },
         [](RunConfig& c, const std::string& v) { c.data.speed_px_per_ms = parse_dbl("data.speed_px_per_ms", v); }},
        {"data.speed_jitter", [](const RunConfig& c) { return fmt_double(c.data.speed_jitter); },
         [](RunConfig& c, const std::string& v) { c.data.speed_jitter = parse_dbl("data.speed_jitter", v); }},
        {"data.vy_jitter", [](const RunConfig& c) { return fmt_double(c.data.vy_jitter); },
         [](RunConfig& c, const std::string& v) { c.data.vy_jitter = parse_dbl("data.vy_jitter", v); }},
        {"data.y_jitter_px", [](const RunConfig& c) { return fmt_double(c.data.y_jitter_px); },
         [](RunConfig& c, const std::string& v) { c.data.y_jitter_px = parse_dbl("data.y_jitter_px", v); }},
        {"data.step_px", [](const RunConfig& c) { return fmt_double(c.data.step_px); },
         [](RunConfig& c, const std::string& v) { c.data.step_px = parse_dbl("data.step_px", v); }},
        {"data.threshold_mismatch", [](const RunConfig& c) { return fmt_double(c.data.threshold_mismatch); },
         [](RunConfig& c, const std::string& v) { c.data.threshold_mismatch = parse_dbl("data.threshold_mismatch", v); }},
        {"data.pixel_refractory_ms", [](const RunConfig& c) { return fmt_double(c.data.pixel_refractory_ms); },
         [](RunConfig& c, const std::string& v) {
             c.data.pixel_refractory_ms = parse_dbl("data.pixel_refractory_ms", v);
         }},
        {"data.latency_jitter_ms", [](const RunConfig& c) { return fmt_double(c.data.latency_jitter_ms); },
         [](RunConfig& c, const std::string& v) { c.data.latency_jitter_ms = parse_dbl("data.latency_jitter_ms", v); }},
        {"data.blur_sigma_px", [](const RunConfig& c) { return fmt_double(c.data.blur_sigma_px); },
         [](RunConfig& c, const std::string& v) { c.data.blur_sigma_px = parse_dbl("data.blur_sigma_px", v); }},
        {"data.rotation_jitter_deg", [](const RunConfig& c) { return fmt_double(c.data.rotation_jitter_deg); },
         [](RunConfig& c, const std::string& v) {
             c.data.rotation_jitter_deg = parse_dbl("data.rotation_jitter_deg", v);
         }},
        {"data.noise_rate_per_s", [](const RunConfig& c) { return fmt_double(c.data.noise_rate_per_s); },
         [](RunConfig& c, const std::string& v) { c.data.noise_rate_per_s = parse_dbl("data.noise_rate_per_s", v); }},
        {"trials", [](const RunConfig& c) { return std::to_string(c.trials); },
         [](RunConfig& c, const std::string& v) { c.trials = static_cast<int>(parse_ll("trials", v, 1, 100000)); }},
        {"train_per_class", [](const RunConfig& c) { return std::to_string(c.train_per_class); },
         [](RunConfig& c, const std::string& v) {
             c.train_per_class = static_cast<int>(parse_ll("train_per_class", v, 1, 10000));
         }},
        {"test_per_class", [](const RunConfig& c) { return std::to_string(c.test_per_class); },
         [](RunConfig& c, const std::string& v) {
             c.test_per_class = static_cast<int>(parse_ll("test_per_class", v, 1, 10000));
         }},
        {"jitter.sigmas",
         [](const RunConfig& c) {
             std::vector<std::string> parts;
             parts.reserve(c.jitter_sigmas.size());
             for (double s : c.jitter_sigmas) parts.push_back(fmt_double(s));
             return join_list(parts);
         },
         [](RunConfig& c, const std::string& v) {
             std::vector<double> sigmas;
             for (const std::string& part : split_list(v)) sigmas.push_back(parse_dbl("jitter.sigmas", part));
             if (sigmas.empty()) throw ConfigError("jitter.sigmas: expected at least one value");
             c.jitter_sigmas = std::move(sigmas);
         }},
        {"jitter.mode", [](const RunConfig& c) { return c.jitter_mode; },
         [](RunConfig& c, const std::string& v) {
             if (v != "train" && v != "test") throw ConfigError("jitter.mode: expected train or test, got '" + v + "'");
             c.jitter_mode = v;
         }},
        {"ablate.include_bypass", [](const RunConfig& c) { return std::to_string(int(c.ablate_bypass)); },
         [](RunConfig& c, const std::string& v) { c.ablate_bypass = parse_bool("ablate.include_bypass", v); }},
        {"bench.repeats", [](const RunConfig& c) { return std::to_string(c.bench_repeats); },
         [](RunConfig& c, const std::string& v) {
             c.bench_repeats = static_cast<int>(parse_ll("bench.repeats", v, 1, 1000));
         }},
        {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
         [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }},
        {"jobs", [](const RunConfig& c) { return std::to_string(c.jobs); },
         [](RunConfig& c, const std::string& v) { c.jobs = static_cast<int>(parse_ll("jobs", v, 1, 4096)); }},
        {"out", [](const RunConfig& c) { return c.out; },
         [](RunConfig& c, const std::string& v) { c.out = v; }},
        {"format", [](const RunConfig& c) { return std::string(format_name(c.format)); },
         [](RunConfig& c, const std::string& v) { c.format = parse_format(v); }},
        {"dataset", [](const RunConfig& c) { return c.dataset; },
         [](RunConfig& c, const std::string& v) { c.dataset = v; }},
        {"model", [](const RunConfig& c) { return c.model; },
         [](RunConfig& c, const std::string& v) { c.model = v; }},
        {"input", [](const RunConfig& c) { return c.input; },
         [](RunConfig& c, const std::string& v) { c.input = v; }},
    };
    return table;
}

} // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    keys.reserve(kv_table().size());
    for (const KvEntry& e : kv_table()) keys.emplace_back(e.key);
    return keys;
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const KvEntry& e : kv_table()) {
        if (key == e.key) {
            e.set(cfg, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

void apply_kv_line(RunConfig& cfg, const std::string& line) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("expected key=value, got '" + line + "'");
    }
    apply_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        try {
            apply_kv_line(cfg, stripped);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    apply_config_text(cfg, text);
    return cfg;
}

void apply_config_file(RunConfig& cfg, const std::string& path) { apply_config_text(cfg, read_file(path)); }

std::string dump_config(const RunConfig& cfg) {
    std::string out;
    for (const KvEntry& e : kv_table()) {
        out += e.key;
        out += '=';
        out += e.get(cfg);
        out += '\n';
    }
    return out;
}

std::uint64_t run_digest(const RunConfig& cfg) { return fnv1a64(dump_config(cfg)); }

std::string run_dir_name(const RunConfig& cfg) {
    return to_hex(run_digest(cfg), 16).substr(0, 8) + "-s" + std::to_string(cfg.seed);
}

std::vector<std::string> effective_labels(const DatasetParams& data) {
    return data.labels.empty() ? glyph_labels() : data.labels;
}

} // namespace hfirst
