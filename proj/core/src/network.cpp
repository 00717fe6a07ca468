#include "hfirst/network.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "hfirst/errors.hpp"
#include "hfirst/log.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

namespace {

constexpr std::uint64_t kMaxTimestamp = std::uint64_t(1) << 62;

std::uint64_t u64_cells(int a, int b) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
}

} // namespace

const char* layer_name(Layer layer) {
    switch (layer) {
    case Layer::s1: return "S1";
    case Layer::c1: return "C1";
    case Layer::s2: return "S2";
    case Layer::c2: return "C2";
    }
    return "?";
}

const char* polarity_name(PolarityPolicy p) {
    switch (p) {
    case PolarityPolicy::merge: return "merge";
    case PolarityPolicy::on_only: return "on_only";
    case PolarityPolicy::off_only: return "off_only";
    }
    return "?";
}

PolarityPolicy parse_polarity(const std::string& name) {
    if (name == "merge") return PolarityPolicy::merge;
    if (name == "on_only") return PolarityPolicy::on_only;
    if (name == "off_only") return PolarityPolicy::off_only;
    throw ConfigError("unknown polarity policy '" + name + "' (expected merge, on_only or off_only)");
}

void S2Kernel::validate() const {
    if (window <= 0 || channels <= 0) {
        throw ValidationError("class kernel '" + label + "' has non-positive window/channels");
    }
    const std::size_t expect = static_cast<std::size_t>(window) * window * channels;
    if (w.size() != expect) {
        throw ValidationError("class kernel '" + label + "' has " + std::to_string(w.size()) +
                              " weights, expected " + std::to_string(expect));
    }
}

void NetworkConfig::validate() const {
    if (bypass_s1 && bypass_s1_c1) {
        throw ConfigError("bypass_s1 and bypass_s1_c1 are mutually exclusive");
    }
    if (geometry.width < 1 || geometry.height < 1) {
        throw ConfigError("sensor geometry must be at least 1x1");
    }
    gabor.validate();
    if (s2_threshold < 1 || s2_threshold > 255) {
        throw ConfigError("s2_threshold must be in [1, 255] mV, got " + std::to_string(s2_threshold));
    }
    if (s2_threshold < 100 || s2_threshold > 200) {
        log::warn("s2_threshold " + std::to_string(s2_threshold) + " mV is outside the nominal [100, 200] range");
    }
    if (s1.v_thresh < 1 || c1.v_thresh < 1 || c2.v_thresh < 1) {
        throw ConfigError("neuron thresholds must be at least 1 mV");
    }
}

std::string canonical_config_text(const NetworkConfig& cfg) {
    std::ostringstream os;
    os << "geometry.width=" << cfg.geometry.width << '\n'
       << "geometry.height=" << cfg.geometry.height << '\n'
       << "gabor.lambda=" << fmt_double(cfg.gabor.lambda) << '\n'
       << "gabor.sigma=" << fmt_double(cfg.gabor.sigma) << '\n'
       << "gabor.gamma=" << fmt_double(cfg.gabor.gamma) << '\n'
       << "gabor.size=" << cfg.gabor.size << '\n'
       << "gabor.orientations=" << cfg.gabor.orientations << '\n'
       << "gabor.weight_scale=" << cfg.gabor.weight_scale << '\n'
       << "s1.v_thresh=" << int(cfg.s1.v_thresh) << '\n'
       << "s1.leak=" << int(cfg.s1.leak) << '\n'
       << "s1.t_refr=" << int(cfg.s1.t_refr) << '\n'
       << "c1.v_thresh=" << int(cfg.c1.v_thresh) << '\n'
       << "c1.leak=" << int(cfg.c1.leak) << '\n'
       << "c1.t_refr=" << int(cfg.c1.t_refr) << '\n'
       << "s2.v_thresh=" << cfg.s2_threshold << '\n'
       << "s2.leak=" << int(cfg.s2_leak) << '\n'
       << "s2.t_refr=" << int(cfg.s2_t_refr) << '\n'
       << "c2.v_thresh=" << int(cfg.c2.v_thresh) << '\n'
       << "c2.leak=" << int(cfg.c2.leak) << '\n'
       << "c2.t_refr=" << int(cfg.c2.t_refr) << '\n'
       << "enable_c2=" << int(cfg.enable_c2) << '\n'
       << "disable_c1_reset=" << int(cfg.disable_c1_reset) << '\n'
       << "disable_s2_reset=" << int(cfg.disable_s2_reset) << '\n'
       << "bypass_s1=" << int(cfg.bypass_s1) << '\n'
       << "bypass_s1_c1=" << int(cfg.bypass_s1_c1) << '\n'
       << "reset_clears_vm=" << int(cfg.reset_clears_vm) << '\n'
       << "polarity=" << polarity_name(cfg.polarity) << '\n';
    return os.str();
}

std::uint64_t config_digest(const NetworkConfig& cfg) { return fnv1a64(canonical_config_text(cfg)); }

ActivationReport& ActivationReport::operator+=(const ActivationReport& other) {
    input_events += other.input_events;
    s1_activations += other.s1_activations;
    c1_ff_activations += other.c1_ff_activations;
    c1_reset_counted += other.c1_reset_counted;
    c1_reset_applied += other.c1_reset_applied;
    s2_ff_activations += other.s2_ff_activations;
    s2_reset_counted += other.s2_reset_counted;
    s2_reset_applied += other.s2_reset_applied;
    c2_activations += other.c2_activations;
    s1_spikes += other.s1_spikes;
    c1_spikes += other.c1_spikes;
    s2_spikes += other.s2_spikes;
    c2_spikes += other.c2_spikes;
    return *this;
}

std::string format_report_text(const ActivationReport& r) {
    std::ostringstream os;
    os << "input_events: " << r.input_events << '\n'
       << "s1_activations: " << r.s1_activations << '\n'
       << "c1_activations: " << r.c1_total() << '\n'
       << "c1_ff_activations: " << r.c1_ff_activations << '\n'
       << "c1_reset_counted: " << r.c1_reset_counted << '\n'
       << "c1_reset_applied: " << r.c1_reset_applied << '\n'
       << "s2_activations: " << r.s2_ff_activations << '\n'
       << "s2_reset_counted: " << r.s2_reset_counted << '\n'
       << "s2_reset_applied: " << r.s2_reset_applied << '\n'
       << "c2_activations: " << r.c2_activations << '\n'
       << "s1_spikes: " << r.s1_spikes << '\n'
       << "c1_spikes: " << r.c1_spikes << '\n'
       << "s2_spikes: " << r.s2_spikes << '\n'
       << "c2_spikes: " << r.c2_spikes << '\n';
    return os.str();
}

std::string report_csv_header() { return "S1,C1,S2,S2_rst,C1_rst_applied,S2_rst_applied\n"; }

std::string report_csv_row(const ActivationReport& r) {
    std::ostringstream os;
    os << r.s1_activations << ',' << r.c1_total() << ',' << r.s2_ff_activations << ',' << r.s2_reset_counted << ','
       << r.c1_reset_applied << ',' << r.s2_reset_applied << '\n';
    return os.str();
}

std::string format_spikes_csv(const std::vector<SpikeRecord>& spikes, const std::vector<std::string>& class_labels) {
    std::string out = "t_us,layer,x,y,channel,label\n";
    char buf[128];
    for (const SpikeRecord& s : spikes) {
        const bool classed = s.layer == Layer::s2 || s.layer == Layer::c2;
        const char* label = classed && s.channel < class_labels.size() ? class_labels[s.channel].c_str() : "";
        std::snprintf(buf, sizeof(buf), "%llu,%s,%u,%u,%u,", static_cast<unsigned long long>(s.t),
                      layer_name(s.layer), unsigned(s.x), unsigned(s.y), unsigned(s.channel));
        out += buf;
        out += label;
        out += '\n';
    }
    return out;
}

Network::Network(const NetworkConfig& cfg, std::vector<S2Kernel> kernels)
    : cfg_(cfg), kernels_(std::move(kernels)) {
    cfg_.validate();

    const int W = cfg_.geometry.width;
    const int H = cfg_.geometry.height;
    c1w_ = (W + 3) / 4;
    c1h_ = (H + 3) / 4;
    c1ch_ = cfg_.bypass_s1 ? 1 : cfg_.gabor.orientations;

    if (cfg_.bypass_s1_c1) {
        s2w_ = W;
        s2h_ = H;
        s2win_ = 32;
    } else {
        s2w_ = c1w_;
        s2h_ = c1h_;
        s2win_ = 8;
    }
    const int s2ch = (cfg_.bypass_s1 || cfg_.bypass_s1_c1) ? 1 : cfg_.gabor.orientations;

    for (const S2Kernel& k : kernels_) {
        k.validate();
        if (k.window != s2win_ || k.channels != s2ch) {
            throw ConfigError("class kernel '" + k.label + "' has shape " + std::to_string(k.window) + "x" +
                              std::to_string(k.window) + "x" + std::to_string(k.channels) + ", network expects " +
                              std::to_string(s2win_) + "x" + std::to_string(s2win_) + "x" + std::to_string(s2ch));
        }
    }

    if (!cfg_.bypass_s1 && !cfg_.bypass_s1_c1) {
        const std::vector<S1Kernel> bank = gabor_bank(cfg_.gabor);
        const int taps = cfg_.gabor.size * cfg_.gabor.size;
        s1_bank_.resize(static_cast<std::size_t>(cfg_.gabor.orientations) * taps);
        for (int o = 0; o < cfg_.gabor.orientations; ++o) {
            std::copy(bank[o].w.begin(), bank[o].w.end(), s1_bank_.begin() + static_cast<std::size_t>(o) * taps);
        }
        s1_.resize(static_cast<std::size_t>(cfg_.gabor.orientations) * u64_cells(W, H));
    }
    if (!cfg_.bypass_s1_c1) {
        c1_.resize(u64_cells(c1w_, c1h_) * c1ch_);
    }
    if (!kernels_.empty()) {
        s2_.resize(kernels_.size() * u64_cells(s2w_, s2h_));
        c2_.resize(kernels_.size());
    }
}

void Network::clear() {
    std::fill(s1_.begin(), s1_.end(), NeuronState{});
    std::fill(c1_.begin(), c1_.end(), NeuronState{});
    std::fill(s2_.begin(), s2_.end(), NeuronState{});
    std::fill(c2_.begin(), c2_.end(), NeuronState{});
    report_ = ActivationReport{};
    last_t_ = 0;
    saw_event_ = false;
}

std::vector<std::string> Network::class_labels() const {
    std::vector<std::string> labels;
    labels.reserve(kernels_.size());
    for (const S2Kernel& k : kernels_) labels.push_back(k.label);
    return labels;
}

void Network::process(const Event& e, std::vector<SpikeRecord>* out) {
    if (e.t >= kMaxTimestamp) {
        throw ValidationError("event timestamp " + std::to_string(e.t) + " us exceeds the supported range");
    }
    if (saw_event_ && e.t < last_t_) {
        throw ValidationError("events must be fed in time order: t=" + std::to_string(e.t) + " us after t=" +
                              std::to_string(last_t_) + " us");
    }
    if (!cfg_.geometry.contains(e.x, e.y)) {
        throw ValidationError("event at (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                              ") is outside the sensor geometry");
    }
    last_t_ = e.t;
    saw_event_ = true;
    ++report_.input_events;

    if (cfg_.polarity == PolarityPolicy::on_only && e.p == 0) return;
    if (cfg_.polarity == PolarityPolicy::off_only && e.p == 1) return;

    const std::uint64_t t = e.t;
    if (cfg_.bypass_s1_c1) {
        if (!kernels_.empty()) feed_s2(t, e.x, e.y, 0, out);
    } else if (cfg_.bypass_s1) {
        feed_c1(t, e.x, e.y, 0, out);
    } else {
        feed_s1(t, e.x, e.y, out);
    }
}

void Network::feed_s1(std::uint64_t t, int x, int y, std::vector<SpikeRecord>* out) {
    const int W = cfg_.geometry.width;
    const int H = cfg_.geometry.height;
    const int size = cfg_.gabor.size;
    const int r = size / 2;
    const int xlo = std::max(0, x - r), xhi = std::min(W - 1, x + r);
    const int ylo = std::max(0, y - r), yhi = std::min(H - 1, y + r);
    const std::int64_t ts = static_cast<std::int64_t>(t);
    const NeuronParams p1 = cfg_.s1;

    for (int o = 0; o < cfg_.gabor.orientations; ++o) {
        const std::int16_t* kern = s1_bank_.data() + static_cast<std::size_t>(o) * size * size;
        NeuronState* plane = s1_.data() + static_cast<std::size_t>(o) * W * H;
        for (int Y = ylo; Y <= yhi; ++Y) {
            // Tap at offset (x - X, y - Y) from the neuron's center.
            const std::int16_t* krow = kern + (y - Y + r) * size;
            NeuronState* row = plane + static_cast<std::size_t>(Y) * W;
            for (int X = xlo; X <= xhi; ++X) {
                ++report_.s1_activations;
                if (integrate(row[X], ts, krow[x - X + r], p1)) {
                    ++report_.s1_spikes;
                    if (out) {
                        out->push_back({t, Layer::s1, static_cast<std::uint16_t>(X), static_cast<std::uint16_t>(Y),
                                        static_cast<std::uint16_t>(o)});
                    }
                    feed_c1(t, X, Y, o, out);
                }
            }
        }
    }
}

void Network::feed_c1(std::uint64_t t, int sx, int sy, int ch, std::vector<SpikeRecord>* out) {
    const int cx = sx / 4;
    const int cy = sy / 4;
    NeuronState* unit = c1_.data() + (static_cast<std::size_t>(cy) * c1w_ + cx) * c1ch_;

    ++report_.c1_ff_activations;
    if (!cfg_.disable_c1_reset) report_.c1_reset_counted += c1ch_ - 1;

    if (!integrate(unit[ch], static_cast<std::int64_t>(t), 1, cfg_.c1)) return;

    ++report_.c1_spikes;
    if (out) {
        out->push_back(
            {t, Layer::c1, static_cast<std::uint16_t>(cx), static_cast<std::uint16_t>(cy), static_cast<std::uint16_t>(ch)});
    }
    if (!cfg_.disable_c1_reset) {
        for (int o = 0; o < c1ch_; ++o) {
            if (o != ch) lateral_reset(unit[o], static_cast<std::int64_t>(t), cfg_.reset_clears_vm);
        }
        report_.c1_reset_applied += c1ch_ - 1;
    }
    if (!kernels_.empty()) feed_s2(t, cx, cy, ch, out);
}

void Network::feed_s2(std::uint64_t t, int cx, int cy, int ch, std::vector<SpikeRecord>* out) {
    const int half = s2win_ / 2;
    const int xlo = std::max(0, cx - (half - 1)), xhi = std::min(s2w_ - 1, cx + half);
    const int ylo = std::max(0, cy - (half - 1)), yhi = std::min(s2h_ - 1, cy + half);
    if (xlo > xhi || ylo > yhi) return;

    const std::size_t ncls = kernels_.size();
    const std::size_t plane_cells = u64_cells(s2w_, s2h_);
    report_.s2_ff_activations += u64_cells(xhi - xlo + 1, yhi - ylo + 1) * ncls;

    const std::int64_t ts = static_cast<std::int64_t>(t);
    const NeuronParams p2 = cfg_.s2_params();
    const int chn = kernels_.empty() ? 1 : kernels_[0].channels;

    for (std::size_t k = 0; k < ncls; ++k) {
        const std::int16_t* kw = kernels_[k].w.data();
        NeuronState* plane = s2_.data() + k * plane_cells;
        for (int Y = ylo; Y <= yhi; ++Y) {
            const int yi = cy - Y + half;
            NeuronState* row = plane + static_cast<std::size_t>(Y) * s2w_;
            for (int X = xlo; X <= xhi; ++X) {
                const int xi = cx - X + half;
                const std::int16_t w = kw[(xi * s2win_ + yi) * chn + ch];
                if (!integrate(row[X], ts, w, p2)) continue;

                ++report_.s2_spikes;
                if (out) {
                    out->push_back({t, Layer::s2, static_cast<std::uint16_t>(X), static_cast<std::uint16_t>(Y),
                                    static_cast<std::uint16_t>(k)});
                }
                if (!cfg_.disable_s2_reset) {
                    // Reset wave over the window around the spike; the
                    // spiking class keeps its own potentials (head start).
                    const int rxlo = std::max(0, X - half), rxhi = std::min(s2w_ - 1, X + half - 1);
                    const int rylo = std::max(0, Y - half), ryhi = std::min(s2h_ - 1, Y + half - 1);
                    const std::uint64_t positions = u64_cells(rxhi - rxlo + 1, ryhi - rylo + 1);
                    report_.s2_reset_counted += positions * ncls;
                    for (std::size_t j = 0; j < ncls; ++j) {
                        if (j == k) continue;
                        NeuronState* jplane = s2_.data() + j * plane_cells;
                        for (int RY = rylo; RY <= ryhi; ++RY) {
                            NeuronState* jrow = jplane + static_cast<std::size_t>(RY) * s2w_;
                            for (int RX = rxlo; RX <= rxhi; ++RX) {
                                lateral_reset(jrow[RX], ts, cfg_.reset_clears_vm);
                            }
                        }
                    }
                    report_.s2_reset_applied += positions * (ncls - 1);
                }
                if (cfg_.enable_c2) feed_c2(t, static_cast<int>(k), out);
            }
        }
    }
}

void Network::feed_c2(std::uint64_t t, int cls, std::vector<SpikeRecord>* out) {
    ++report_.c2_activations;
    if (integrate(c2_[static_cast<std::size_t>(cls)], static_cast<std::int64_t>(t), 1, cfg_.c2)) {
        ++report_.c2_spikes;
        if (out) out->push_back({t, Layer::c2, 0, 0, static_cast<std::uint16_t>(cls)});
    }
}

NetworkResult run_network(const std::vector<Event>& events, const NetworkConfig& cfg, std::vector<S2Kernel> kernels) {
    Network net(cfg, std::move(kernels));
    NetworkResult result;
    for (const Event& e : events) net.process(e, &result.spikes);
    result.report = net.report();
    return result;
}

} // namespace hfirst
