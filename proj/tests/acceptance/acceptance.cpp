// Release gate: every check below must print [PASS]. Each check is
// self-contained, uses fixed seeds, and states its tolerance inline.
// Exit code is the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../support/neuron_cases.hpp"
#include "hfirst/aer_io.hpp"
#include "hfirst/classify.hpp"
#include "hfirst/commands.hpp"
#include "hfirst/config.hpp"
#include "hfirst/dataset.hpp"
#include "hfirst/errors.hpp"
#include "hfirst/gabor.hpp"
#include "hfirst/glyphs.hpp"
#include "hfirst/model_io.hpp"
#include "hfirst/network.hpp"
#include "hfirst/synth.hpp"
#include "hfirst/training.hpp"
#include "hfirst/util.hpp"

namespace {

using namespace hfirst;
namespace fs = std::filesystem;

struct GateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw GateError(what);
}

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// Shared expensive fixtures: the default synthetic dataset and its plain
// 10-trial cross-validation, reused by the protocol and jitter checks.
struct GateState {
    std::vector<Example> protocol_data;
    XvalResult base;
    bool base_ready = false;

    const std::vector<Example>& dataset() {
        if (protocol_data.empty()) protocol_data = synth_dataset_memory(RunConfig{});
        return protocol_data;
    }
    static XvalParams protocol_params() {
        XvalParams xp;
        xp.trials = 10;
        xp.train_per_class = 1;
        xp.test_per_class = 1;
        xp.seed = 1;
        return xp;
    }
    const XvalResult& baseline() {
        if (!base_ready) {
            base = cross_validate(dataset(), NetworkConfig{}, protocol_params());
            base_ready = true;
        }
        return base;
    }
};

// ---------------------------------------------------------------- check 1

std::string check_neuron_table() {
    const std::vector<hfirst_test::NeuronCase> cases = hfirst_test::neuron_cases();
    require(cases.size() >= 30, fmt("only %zu hand-checked cases", cases.size()));
    for (const hfirst_test::NeuronCase& c : cases) {
        require(c.run(), "case failed: " + c.name);
    }
    return fmt("%zu hand-checked state transitions, all exact integer matches", cases.size());
}

// ---------------------------------------------------------------- check 2

long long direct_filter_tap(const GaborParams& gp, double theta_deg, int du, int dv) {
    const double pi = std::acos(-1.0);
    const double theta = theta_deg * pi / 180.0;
    const double u0 = du * std::cos(theta) + dv * std::sin(theta);
    const double v0 = -du * std::sin(theta) + dv * std::cos(theta);
    const double envelope = std::exp(-(u0 * u0 + gp.gamma * gp.gamma * v0 * v0) / (2.0 * gp.sigma * gp.sigma));
    return std::llround(gp.weight_scale * envelope * std::cos(2.0 * pi * u0 / gp.lambda));
}

std::string check_filter_oracle() {
    const GaborParams gp; // lambda 5, sigma 2.8, gamma 0.3, 7x7, 12 orientations, scale 100
    const std::vector<S1Kernel> bank = gabor_bank(gp);
    require(bank.size() == 12, "expected 12 orientations");
    const int r = gp.size / 2;
    for (int k = 0; k < 12; ++k) {
        for (int dv = -r; dv <= r; ++dv) {
            for (int du = -r; du <= r; ++du) {
                const long long want = direct_filter_tap(gp, gp.theta_deg(k), du, dv);
                require(bank[k].at(du, dv) == want,
                        fmt("tap mismatch k=%d du=%d dv=%d: engine %d oracle %lld", k, du, dv,
                            bank[k].at(du, dv), want));
            }
        }
    }
    // Even symmetry W(du,dv) == W(-du,-dv) over random orientations and taps.
    std::mt19937_64 rng(22);
    for (int i = 0; i < 1000; ++i) {
        const double theta = static_cast<double>(rng() % 36000) / 100.0;
        const int du = static_cast<int>(rng() % 7) - 3;
        const int dv = static_cast<int>(rng() % 7) - 3;
        require(gabor_weight(theta, du, dv, gp) == gabor_weight(theta, -du, -dv, gp),
                fmt("symmetry violated at theta=%.2f du=%d dv=%d", theta, du, dv));
    }
    return "12x49 taps equal direct evaluation; even symmetry holds for 1000 random taps";
}

// ---------------------------------------------------------------- check 3

std::string check_accounting() {
    NetworkConfig net; // 128x128, 12 orientations, default thresholds
    std::vector<S2Kernel> kernels(36);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        kernels[i].label = "k" + std::to_string(i);
        kernels[i].window = 8;
        kernels[i].channels = 12;
        kernels[i].w.assign(8 * 8 * 12, -1);
    }
    // Class 0 fires instantly on any pooled spike; the rest stay silent.
    for (int c = 0; c < 12; ++c) kernels[0].w[static_cast<std::size_t>((4 * 8 + 4) * 12 + c)] = 255;

    // 10^4 events deep inside the sensor: every fan-out window is untruncated,
    // so the per-spike tallies must hit their closed forms exactly.
    std::mt19937_64 rng(2026);
    std::vector<Event> events;
    events.reserve(10000);
    std::uint64_t t = 1000;
    for (int i = 0; i < 10000; ++i) {
        t += 10;
        events.push_back({t, static_cast<std::uint16_t>(20 + rng() % 87),
                          static_cast<std::uint16_t>(20 + rng() % 87), 1});
    }

    Network network(net, kernels);
    for (const Event& e : events) network.process(e, nullptr);
    const ActivationReport& r = network.report();

    require(r.input_events == 10000, "event count");
    require(r.s1_activations == 588ull * 10000,
            fmt("S1: %llu != 588/event", static_cast<unsigned long long>(r.s1_activations)));
    require(r.s1_spikes > 0 && r.c1_spikes > 0 && r.s2_spikes > 0, "stimulus must spike at every layer");
    require(r.c1_total() == 12ull * r.s1_spikes,
            fmt("C1: %llu != 12 x %llu S1 spikes", static_cast<unsigned long long>(r.c1_total()),
                static_cast<unsigned long long>(r.s1_spikes)));
    require(r.s2_ff_activations == 2304ull * r.c1_spikes,
            fmt("S2: %llu != 64*36 x %llu C1 spikes", static_cast<unsigned long long>(r.s2_ff_activations),
                static_cast<unsigned long long>(r.c1_spikes)));
    require(r.s2_reset_counted == 2304ull * r.s2_spikes,
            fmt("S2 reset: %llu != 64*36 x %llu S2 spikes",
                static_cast<unsigned long long>(r.s2_reset_counted),
                static_cast<unsigned long long>(r.s2_spikes)));
    return fmt("10^4 events: 588/event, 12/S1-spike (%llu), 2304/C1-spike (%llu), 2304/S2-spike (%llu)",
               static_cast<unsigned long long>(r.s1_spikes), static_cast<unsigned long long>(r.c1_spikes),
               static_cast<unsigned long long>(r.s2_spikes));
}

// ---------------------------------------------------------------- check 4

std::string check_wta_orientation() {
    // A row of events along x is the preferred stimulus of the 90-degree
    // channel (index 6): its filter ridge lies along du at dv=0. Events are
    // presented outside-in so the 90-degree unit crosses threshold strictly
    // before the flanking 75/105-degree units (channels 5 and 7) anywhere.
    NetworkConfig cfg;
    Network net(cfg, {});
    std::mt19937_64 rng(90);
    const int order[7] = {-3, 3, -2, 2, -1, 1, 0};

    for (int trial = 0; trial < 20; ++trial) {
        net.clear();
        const int x0 = 10 + static_cast<int>(rng() % 108);
        const int y0 = 10 + static_cast<int>(rng() % 108);
        std::vector<SpikeRecord> spikes;
        for (int du : order) {
            net.process({1000, static_cast<std::uint16_t>(x0 + du), static_cast<std::uint16_t>(y0), 1},
                        &spikes);
        }

        const int cx = x0 / 4, cy = y0 / 4;
        bool saw_pool_spike = false;
        bool s1_75 = false, s1_105 = false;
        for (const SpikeRecord& s : spikes) {
            if (s.layer == Layer::s1 && s.x == x0 && s.y == y0) {
                if (s.channel == 5) s1_75 = true;
                if (s.channel == 7) s1_105 = true;
            }
            if (s.layer != Layer::c1 || s.x != cx || s.y != cy) continue;
            if (!saw_pool_spike) {
                require(s.channel == 6,
                        fmt("edge at (%d,%d): first pooled spike was channel %u", x0, y0, s.channel));
                saw_pool_spike = true;
            }
            require(s.channel != 5 && s.channel != 7,
                    fmt("edge at (%d,%d): flanking channel %u escaped suppression", x0, y0, s.channel));
        }
        require(saw_pool_spike, fmt("edge at (%d,%d): no pooled spike at the stimulus unit", x0, y0));
        require(s1_75 && s1_105,
                fmt("edge at (%d,%d): flanking filters never spiked, suppression untested", x0, y0));
    }
    return "20/20 random edges: 90-degree channel pooled first, 75/105 suppressed at that unit";
}

// ---------------------------------------------------------------- check 5

std::string check_protocol(GateState& state) {
    const std::vector<Example>& data = state.dataset();
    require(data.size() == 72, "expected 36 classes x 2 recordings");
    const XvalParams xp = GateState::protocol_params();
    const XvalResult& base = state.baseline();

    require(base.mean_accuracy >= 0.42,
            fmt("full-model accuracy %.1f%% below the 42%% floor (15x chance)", base.mean_accuracy * 100.0));

    NetworkConfig noreset;
    noreset.disable_c1_reset = true;
    noreset.disable_s2_reset = true;
    const XvalResult nr = cross_validate(data, noreset, xp);
    for (std::size_t t = 0; t < base.trials.size(); ++t) {
        require(base.trials[t].eval.accuracy > nr.trials[t].eval.accuracy,
                fmt("trial %zu: full %.3f does not beat no-reset %.3f", t, base.trials[t].eval.accuracy,
                    nr.trials[t].eval.accuracy));
    }

    // Computational-cost direction: the variant that skips the filter and
    // pooling layers must spend >= 10x the template-layer feedforward
    // activations on an identical evaluation workload (first recording per
    // class trains, second recording of the first three classes evaluates).
    const std::vector<ClassExamples> groups = group_by_label(data);
    std::vector<ClassExamples> train_groups;
    std::vector<Example> tests;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        require(groups[i].recordings.size() == 2, "two recordings per class");
        train_groups.push_back({groups[i].label, {groups[i].recordings[0]}});
        if (i < 3) tests.push_back({groups[i].label + "_1", groups[i].label, groups[i].recordings[1]});
    }
    const TrainingParams tp;
    const NetworkConfig full_net;
    const TrainedModel full_model = train_classes(train_groups, full_net, tp);
    const EvalResult full_eval = evaluate(full_model, tests, full_net);

    NetworkConfig bypass_net;
    bypass_net.bypass_s1_c1 = true;
    const TrainedModel bypass_model = train_classes(train_groups, bypass_net, tp);
    const EvalResult bypass_eval = evaluate(bypass_model, tests, bypass_net);

    require(full_eval.report.s2_ff_activations > 0, "full model produced no template activations");
    const double ratio = static_cast<double>(bypass_eval.report.s2_ff_activations) /
                         static_cast<double>(full_eval.report.s2_ff_activations);
    require(ratio >= 10.0, fmt("bypass/full template activation ratio %.1fx below 10x", ratio));

    return fmt("accuracy %s; full > no-reset on all 10 trials; bypass costs %.0fx the template activations",
               format_percent_summary(base.mean_accuracy, base.std_accuracy).c_str(), ratio);
}

// ---------------------------------------------------------------- check 6

std::string check_jitter(GateState& state) {
    const std::vector<Example>& data = state.dataset();
    const XvalResult& base = state.baseline();
    const XvalParams xp = GateState::protocol_params();

    XvalParams xp_test = xp;
    xp_test.test_jitter_sigma_ms = 5.0;
    const XvalResult test5 = cross_validate(data, NetworkConfig{}, xp_test);
    require(base.mean_accuracy - test5.mean_accuracy >= 0.10,
            fmt("test jitter 5 ms dropped accuracy only %.1f points",
                (base.mean_accuracy - test5.mean_accuracy) * 100.0));

    XvalParams xp_train = xp;
    xp_train.training.jitter_sigma_ms = 10.0;
    const XvalResult train10 = cross_validate(data, NetworkConfig{}, xp_train);
    require(std::abs(train10.mean_accuracy - base.mean_accuracy) <= 0.05,
            fmt("train jitter 10 ms moved accuracy %.1f points",
                std::abs(train10.mean_accuracy - base.mean_accuracy) * 100.0));

    return fmt("clean %.1f%%, test-jitter 5 ms %.1f%% (drop >= 10 pts), train-jitter 10 ms %.1f%% (within 5 pts)",
               base.mean_accuracy * 100.0, test5.mean_accuracy * 100.0, train10.mean_accuracy * 100.0);
}

// ---------------------------------------------------------------- check 7

std::vector<Event> sweep_events(char glyph) {
    const Sprite s = glyph_sprite(glyph, 2);
    SynthParams p;
    p.geometry = {64, 64};
    p.start = {-double(s.width), 25.0};
    return synth_translate(s, {1.0, 0.0}, 64.0 + s.width, p);
}

std::string check_classifier_identities() {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::uint64_t> n(1 + rng() % 10);
        std::uint64_t total = 0;
        for (auto& v : n) {
            v = rng() % 6;
            total += v;
        }
        const std::vector<double> p = soft_scores(n);
        int ref = -1;
        std::uint64_t best = 0;
        double sum = 0.0;
        for (std::size_t j = 0; j < n.size(); ++j) {
            sum += p[j];
            if (n[j] > best) {
                best = n[j];
                ref = static_cast<int>(j);
            }
        }
        if (total == 0) {
            require(sum == 0.0 && hard_decision(n) == -1, "zero-spike convention violated");
        } else {
            require(std::abs(sum - 1.0) <= 1e-12, "normalization violated");
            require(hard_decision(n) == ref, "argmax/tie-break mismatch");
        }
    }

    // Decision invariance under uniform timestamp shifts: 100 streams, each
    // classified at its original offset and once shifted by a random amount.
    NetworkConfig cfg;
    cfg.geometry = {64, 64};
    std::vector<ClassExamples> groups = {{"L", {sweep_events('L')}}, {"T", {sweep_events('T')}}};
    const TrainedModel model = train_classes(groups, cfg, TrainingParams{});
    const std::vector<Event> sweep = sweep_events('T');

    int decided = 0;
    for (int s = 0; s < 100; ++s) {
        std::vector<Event> stream;
        if (s < 70) {
            stream = sweep;
        } else {
            std::uint64_t t = 0;
            for (int i = 0; i < 40; ++i) {
                t += 1 + rng() % 400;
                stream.push_back({t, static_cast<std::uint16_t>(20 + rng() % 10),
                                  static_cast<std::uint16_t>(20 + rng() % 10),
                                  static_cast<std::uint8_t>(rng() % 2)});
            }
        }
        const std::uint64_t shift = 1 + rng() % 1000000000ull;
        std::vector<Event> shifted = stream;
        for (Event& e : shifted) e.t += shift;

        const int d0 = classify_hard(run_network(stream, cfg, model.kernels).spikes, model.kernels.size());
        const int d1 = classify_hard(run_network(shifted, cfg, model.kernels).spikes, model.kernels.size());
        require(d0 == d1, fmt("stream %d: decision %d changed to %d under shift", s, d0, d1));
        if (d0 >= 0) ++decided;
    }
    require(decided > 0, "every stream was silent; invariance untested");
    return fmt("10^4 count vectors and 100 shifted streams (%d with decisions): zero violations", decided);
}

// ---------------------------------------------------------------- check 8

std::string snapshot(const fs::path& dir, const std::vector<std::string>& names) {
    std::string all;
    for (const std::string& name : names) {
        all += name;
        all += '\0';
        all += read_file(dir / name);
        all += '\0';
    }
    return all;
}

std::string check_determinism() {
    const fs::path tmp = fs::temp_directory_path() / "hfirst_gate_determinism";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    RunConfig cfg;
    apply_kv(cfg, "geometry.width", "64");
    apply_kv(cfg, "geometry.height", "64");
    apply_kv(cfg, "data.labels", "T,L,7");
    apply_kv(cfg, "data.glyph_scale", "2");
    apply_kv(cfg, "trials", "2");
    cfg.out = (tmp / "runs").string();

    int compared = 0;
    auto rerun_identical = [&](const char* what, const std::function<fs::path()>& command,
                               const std::vector<std::string>& files) {
        const fs::path dir = command();
        const std::string before = snapshot(dir, files);
        const fs::path dir2 = command();
        require(dir2 == dir, std::string(what) + ": rerun landed in a different directory");
        require(snapshot(dir, files) == before, std::string(what) + ": rerun changed result bytes");
        compared += static_cast<int>(files.size());
        return dir;
    };

    RunConfig synth_cfg = cfg;
    std::vector<std::string> synth_files = {"config.txt", "manifest.json"};
    for (const char* l : {"T", "L", "7"})
        for (int r = 0; r < 2; ++r) synth_files.push_back(std::string(l) + "_" + std::to_string(r) + ".aer");
    const fs::path data_dir =
        rerun_identical("synth", [&] { return cmd_synth(synth_cfg); }, synth_files);

    RunConfig train_cfg = cfg;
    train_cfg.out = (tmp / "runs_train").string();
    train_cfg.dataset = (data_dir / "manifest.json").string();
    const fs::path train_dir =
        rerun_identical("train", [&] { return cmd_train(train_cfg); }, {"config.txt", "model.txt"});

    RunConfig eval_cfg = train_cfg;
    eval_cfg.out = (tmp / "runs_eval").string();
    eval_cfg.model = (train_dir / "model.txt").string();
    rerun_identical("eval", [&] { return cmd_eval(eval_cfg); }, {"results.csv", "report.csv", "report.txt"});

    RunConfig xval_cfg = train_cfg;
    xval_cfg.out = (tmp / "runs_xval").string();
    rerun_identical("xval", [&] { return cmd_xval(xval_cfg); }, {"results.csv", "summary.txt", "report.csv"});

    RunConfig stream_cfg = cfg;
    stream_cfg.out = (tmp / "runs_stream").string();
    stream_cfg.model = (train_dir / "model.txt").string();
    stream_cfg.input = (data_dir / "T_0.aer").string();
    rerun_identical("stream", [&] { return cmd_stream(stream_cfg); }, {"detections.csv"});

    fs::remove_all(tmp);
    return fmt("synth/train/eval/xval/stream reruns byte-identical across %d result files", compared);
}

// ---------------------------------------------------------------- check 9

std::string check_throughput() {
    const RunConfig cfg; // 36 classes, 128x128
    const BenchWorkload workload = build_bench_workload(cfg);
    const BenchStats stats = run_bench_passes(cfg, workload, 3);
    require(stats.events_per_second >= 100000.0,
            fmt("%.0f events/s below the 100k floor (%llu events, median of 3)", stats.events_per_second,
                static_cast<unsigned long long>(stats.events)));
    return fmt("%.0f events/s over %llu events (median of 3 passes)", stats.events_per_second,
               static_cast<unsigned long long>(stats.events));
}

// ---------------------------------------------------------------- check 10

std::string check_external_cards() {
    const char* dir = std::getenv("HFIRST_CARDS_DIR");
    if (dir == nullptr || *dir == '\0') {
        return "skipped: HFIRST_CARDS_DIR not set (external recordings are optional)";
    }
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    const Manifest manifest = load_manifest(manifest_path);
    const std::vector<Example> data = load_dataset(manifest_path);

    NetworkConfig net;
    net.geometry = manifest.geometry;
    net.s2_threshold = 150;
    XvalParams xp;
    xp.trials = 10;
    xp.train_per_class = 5;
    xp.test_per_class = 5;
    xp.seed = 1;
    const XvalResult r = cross_validate(data, net, xp);
    return fmt("card protocol over %zu recordings: %s (reported, no floor asserted)", data.size(),
               format_percent_summary(r.mean_accuracy, r.std_accuracy).c_str());
}

// ----------------------------------------------------------------

struct Check {
    int num;
    const char* name;
    double time_limit_s; // 0 = unbounded
    std::function<std::string()> run;
};

} // namespace

int main() {
    GateState state;
    const std::vector<Check> checks = {
        {1, "integrate-and-fire semantics table", 1.0, check_neuron_table},
        {2, "oriented filter bank oracle equivalence", 1.0, check_filter_oracle},
        {3, "activation accounting closed forms", 30.0, check_accounting},
        {4, "temporal winner-take-all orientation selectivity", 0.0, check_wta_orientation},
        {5, "synthetic 36-class recognition protocol", 600.0, [&] { return check_protocol(state); }},
        {6, "timing jitter robustness profile", 900.0, [&] { return check_jitter(state); }},
        {7, "classifier decision identities", 0.0, check_classifier_identities},
        {8, "byte-identical command reruns", 0.0, check_determinism},
        {9, "single-core throughput floor", 0.0, check_throughput},
        {10, "external card-deck protocol", 0.0, check_external_cards},
    };

    int failures = 0;
    for (const Check& c : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = true;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            pass = false;
            detail = e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (pass && c.time_limit_s > 0.0 && dt > c.time_limit_s) {
            pass = false;
            detail = fmt("took %.1f s, over the %.0f s budget; %s", dt, c.time_limit_s, detail.c_str());
        }
        std::printf("[%s] %d. %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", c.num, c.name, detail.c_str(), dt);
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    if (failures == 0) {
        std::printf("all %zu checks passed\n", checks.size());
    } else {
        std::printf("%d of %zu checks FAILED\n", failures, checks.size());
    }
    return failures;
}
