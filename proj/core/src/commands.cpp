#include "hfirst/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hfirst/errors.hpp"
#include "hfirst/glyphs.hpp"
#include "hfirst/log.hpp"
#include "hfirst/model_io.hpp"
#include "hfirst/perturb.hpp"
#include "hfirst/synth.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

std::vector<Example> load_required_dataset(const RunConfig& cfg, const char* cmd) {
    require(!cfg.dataset.empty(), std::string(cmd) + " requires dataset=<manifest path>");
    return load_dataset(cfg.dataset);
}

TrainedModel load_required_model(const RunConfig& cfg, const char* cmd) {
    require(!cfg.model.empty(), std::string(cmd) + " requires model=<model path>");
    const TrainedModel model = load_model(cfg.model);
    if (model.digest != config_digest(cfg.net)) {
        log::warn("model '" + cfg.model + "' was trained under a different network configuration");
    }
    return model;
}

XvalParams xval_params(const RunConfig& cfg) {
    XvalParams p;
    p.trials = cfg.trials;
    p.train_per_class = cfg.train_per_class;
    p.test_per_class = cfg.test_per_class;
    p.seed = cfg.seed;
    p.jobs = cfg.jobs;
    p.training = cfg.training;
    return p;
}

/// Concatenate recordings into one continuous stream, each shifted to start
/// one gap after the previous recording ends.
std::vector<Event> concatenate(const std::vector<Example>& examples, double gap_ms) {
    const auto gap_us = static_cast<std::uint64_t>(round_half_away(gap_ms * 1000.0));
    std::vector<Event> out;
    for (const Example& ex : examples) {
        if (ex.events.empty()) continue;
        if (out.empty()) {
            out = ex.events;
        } else {
            const std::uint64_t base = out.back().t + gap_us;
            const std::uint64_t first = ex.events.front().t;
            for (Event e : ex.events) {
                e.t = base + (e.t - first);
                out.push_back(e);
            }
        }
    }
    return out;
}

} // namespace

fs::path run_dir(const RunConfig& cfg) { return fs::path(cfg.out) / run_dir_name(cfg); }

fs::path prepare_run_dir(const RunConfig& cfg) {
    const fs::path dir = run_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create run directory " + dir.string() + ": " + ec.message());
    write_file(dir / "config.txt", dump_config(cfg));
    return dir;
}

SynthRecording synth_recording(const RunConfig& cfg, const std::string& label, std::size_t class_index,
                               int recording_index) {
    require(is_glyph_label(label), "no built-in sprite for label '" + label + "' (expected one of 0-9, A-Z)");

    const std::uint64_t rec_seed = mix64(mix64(cfg.seed, class_index), static_cast<std::uint64_t>(recording_index));
    Sprite sprite = glyph_sprite(label[0], cfg.data.glyph_scale, cfg.data.ink, cfg.data.background);

    std::mt19937_64 rng(mix64(rec_seed, 0x7472616aULL));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double vx = cfg.data.speed_px_per_ms * (1.0 + cfg.data.speed_jitter * uni(rng));
    const double vy = cfg.data.vy_jitter * uni(rng);
    require(vx > 0.0, "synth horizontal speed must stay positive; lower data.speed_jitter");

    // Pose and optics: a small per-recording tilt keeps strokes off the pixel
    // grid (so edge pixels do not cross thresholds in lockstep), and the
    // point-spread blur turns step edges into ramps the way a real lens does.
    if (cfg.data.rotation_jitter_deg != 0.0) {
        sprite = rotate_sprite(sprite, cfg.data.rotation_jitter_deg * uni(rng));
    }
    if (cfg.data.blur_sigma_px > 0.0) {
        sprite = blur_sprite(sprite, cfg.data.blur_sigma_px);
    }
    require(sprite.width <= cfg.net.geometry.width && sprite.height <= cfg.net.geometry.height,
            "glyph sprite does not fit the sensor");
    const double y0 = (cfg.net.geometry.height - sprite.height) / 2.0 + cfg.data.y_jitter_px * uni(rng);

    // Start fully inside the frame: the recognition race should open on a
    // complete view of the glyph, not on the sliver that leads an off-screen
    // entry. The sweep still exits past the right edge.
    const double x0 = 2.0;
    const double duration_ms = (cfg.net.geometry.width - x0 + sprite.width) / vx;

    SynthParams sp;
    sp.contrast_threshold = cfg.data.contrast_threshold;
    sp.geometry = cfg.net.geometry;
    // Per-pixel threshold mismatch is fixed-pattern noise of the simulated
    // sensor, so its seed is shared by every recording of a dataset.
    sp.seed = mix64(cfg.seed, 0x73656e73ULL);
    sp.start = {x0, y0};
    sp.step_px = cfg.data.step_px;
    sp.threshold_mismatch = cfg.data.threshold_mismatch;
    sp.pixel_refractory_us = static_cast<std::uint64_t>(std::llround(std::max(0.0, cfg.data.pixel_refractory_ms) * 1000.0));

    SynthRecording rec;
    rec.events = synth_translate(sprite, {vx, vy}, duration_ms, sp);
    if (cfg.data.noise_rate_per_s > 0.0) {
        rec.events = add_noise(rec.events, cfg.data.noise_rate_per_s, cfg.net.geometry, mix64(rec_seed, 0x6e6f6973ULL));
    }
    if (cfg.data.latency_jitter_ms > 0.0) {
        rec.events = add_jitter(rec.events, cfg.data.latency_jitter_ms, mix64(rec_seed, 0x6c617463ULL));
    }

    rec.info.id = label + "_" + std::to_string(recording_index);
    rec.info.label = label;
    rec.info.file = rec.info.id + format_extension(cfg.format);
    rec.info.seed = rec_seed;
    rec.info.num_events = rec.events.size();
    rec.info.trajectory = TrajectoryInfo{sp.start, {vx, vy}, duration_ms};
    return rec;
}

std::vector<Example> synth_dataset_memory(const RunConfig& cfg) {
    const std::vector<std::string> labels = effective_labels(cfg.data);
    std::vector<Example> out;
    out.reserve(labels.size() * static_cast<std::size_t>(cfg.data.recordings_per_class));
    for (std::size_t ci = 0; ci < labels.size(); ++ci) {
        for (int ri = 0; ri < cfg.data.recordings_per_class; ++ri) {
            SynthRecording rec = synth_recording(cfg, labels[ci], ci, ri);
            out.push_back(Example{rec.info.id, rec.info.label, std::move(rec.events)});
        }
    }
    return out;
}

fs::path cmd_synth(const RunConfig& cfg) {
    const fs::path dir = prepare_run_dir(cfg);
    const std::vector<std::string> labels = effective_labels(cfg.data);

    Manifest manifest;
    manifest.geometry = cfg.net.geometry;
    manifest.format = cfg.format;

    std::uint64_t total_events = 0;
    for (std::size_t ci = 0; ci < labels.size(); ++ci) {
        for (int ri = 0; ri < cfg.data.recordings_per_class; ++ri) {
            SynthRecording rec = synth_recording(cfg, labels[ci], ci, ri);
            write_events_file(dir / rec.info.file, rec.events, cfg.format);
            total_events += rec.events.size();
            manifest.recordings.push_back(std::move(rec.info));
        }
    }
    save_manifest(manifest, (dir / "manifest.json").string());

    std::printf("dataset: %s (%zu classes, %zu recordings, %llu events)\n", dir.string().c_str(), labels.size(),
                manifest.recordings.size(), static_cast<unsigned long long>(total_events));
    return dir;
}

fs::path cmd_train(const RunConfig& cfg) {
    const std::vector<Example> examples = load_required_dataset(cfg, "train");
    TrainingParams tp = cfg.training;
    tp.jitter_seed = mix64(cfg.seed, 0x747261696eULL);
    const TrainedModel model = train_classes(group_by_label(examples), cfg.net, tp);

    const fs::path dir = prepare_run_dir(cfg);
    const fs::path model_path = dir / "model.txt";
    save_model(model, model_path.string());
    std::printf("model: %s (%zu classes)\n", model_path.string().c_str(), model.kernels.size());
    return dir;
}

fs::path cmd_eval(const RunConfig& cfg) {
    const TrainedModel model = load_required_model(cfg, "eval");
    const std::vector<Example> examples = load_required_dataset(cfg, "eval");
    const EvalResult eval = evaluate(model, examples, cfg.net);

    const fs::path dir = prepare_run_dir(cfg);
    std::vector<TrialResult> trials(1);
    trials[0].seed = cfg.seed;
    trials[0].eval = eval;
    write_file(dir / "results.csv", format_results_csv(trials, eval.accuracy, 0.0));
    write_file(dir / "report.txt", format_report_text(eval.report));
    write_file(dir / "report.csv", report_csv_header() + report_csv_row(eval.report));

    std::printf("accuracy: %.1f%% over %zu recordings (negative-response reading: %.1f%%)\n", eval.accuracy * 100.0,
                examples.size(), eval.negative_response_accuracy * 100.0);
    return dir;
}

fs::path cmd_xval(const RunConfig& cfg) {
    const std::vector<Example> examples = load_required_dataset(cfg, "xval");
    const XvalResult result = cross_validate(examples, cfg.net, xval_params(cfg));

    const fs::path dir = prepare_run_dir(cfg);
    write_file(dir / "results.csv", format_results_csv(result.trials, result.mean_accuracy, result.std_accuracy));
    const std::string summary = format_percent_summary(result.mean_accuracy, result.std_accuracy);
    write_file(dir / "summary.txt", summary + "\n");
    ActivationReport total;
    for (const TrialResult& t : result.trials) total += t.eval.report;
    write_file(dir / "report.csv", report_csv_header() + report_csv_row(total));

    std::printf("accuracy: %s over %d trials\n", summary.c_str(), cfg.trials);
    return dir;
}

fs::path cmd_jitter(const RunConfig& cfg) {
    const std::vector<Example> examples = load_required_dataset(cfg, "jitter");
    const JitterMode mode = parse_jitter_mode(cfg.jitter_mode);
    const std::vector<JitterPoint> points = jitter_sweep(examples, cfg.jitter_sigmas, mode, cfg.net, xval_params(cfg));

    const fs::path dir = prepare_run_dir(cfg);
    write_file(dir / "jitter.csv", format_jitter_csv(points, mode));
    for (const JitterPoint& p : points) {
        std::printf("sigma %s ms (%s): %s\n", fmt_double(p.sigma_ms).c_str(), jitter_mode_name(mode),
                    format_percent_summary(p.mean_accuracy, p.std_accuracy).c_str());
    }
    return dir;
}

fs::path cmd_stream(const RunConfig& cfg) {
    const TrainedModel model = load_required_model(cfg, "stream");
    require(!cfg.input.empty(), "stream requires input=<event file path>");
    const DecodeResult input = read_events_file(cfg.input, cfg.net.geometry);

    const std::vector<Detection> detections = stream_detections(model, input.events, cfg.net);
    const fs::path dir = prepare_run_dir(cfg);
    write_file(dir / "detections.csv", format_detections_csv(detections));
    std::printf("detections: %zu over %zu events\n", detections.size(), input.events.size());
    return dir;
}

fs::path cmd_ablate(const RunConfig& cfg) {
    const std::vector<Example> examples = load_required_dataset(cfg, "ablate");

    struct Variant {
        const char* name;
        bool no_c1, no_s2, byp_s1, byp_s1c1;
    };
    std::vector<Variant> variants = {
        {"full", false, false, false, false},
        {"no-c1-reset", true, false, false, false},
        {"no-s2-reset", false, true, false, false},
        {"no-reset", true, true, false, false},
    };
    if (cfg.ablate_bypass) {
        variants.push_back({"bypass-s1", false, false, true, false});
        variants.push_back({"bypass-s1-c1", false, false, false, true});
    }

    std::ostringstream csv;
    csv << "variant,mean_acc,std_acc," << report_csv_header();
    for (const Variant& v : variants) {
        NetworkConfig net = cfg.net;
        net.disable_c1_reset = v.no_c1;
        net.disable_s2_reset = v.no_s2;
        net.bypass_s1 = v.byp_s1;
        net.bypass_s1_c1 = v.byp_s1c1;
        const XvalResult r = cross_validate(examples, net, xval_params(cfg));
        ActivationReport total;
        for (const TrialResult& t : r.trials) total += t.eval.report;
        csv << v.name << ',' << fmt_double(r.mean_accuracy) << ',' << fmt_double(r.std_accuracy) << ','
            << report_csv_row(total);
        std::printf("%-14s %s\n", v.name, format_percent_summary(r.mean_accuracy, r.std_accuracy).c_str());
    }

    const fs::path dir = prepare_run_dir(cfg);
    write_file(dir / "ablate.csv", csv.str());
    return dir;
}

BenchWorkload build_bench_workload(const RunConfig& cfg) {
    BenchWorkload w;
    std::vector<Example> examples;
    if (!cfg.dataset.empty()) {
        examples = load_dataset(cfg.dataset);
    } else {
        RunConfig scfg = cfg;
        scfg.data.recordings_per_class = 1;
        examples = synth_dataset_memory(scfg);
    }

    if (!cfg.model.empty()) {
        w.model = load_model(cfg.model);
    } else {
        TrainingParams tp = cfg.training;
        tp.jitter_seed = mix64(cfg.seed, 0x747261696eULL);
        w.model = train_classes(group_by_label(examples), cfg.net, tp);
    }
    w.stream = concatenate(examples, cfg.training.gap_ms);
    return w;
}

BenchStats run_bench_passes(const RunConfig& cfg, const BenchWorkload& workload, int repeats) {
    BenchStats stats;
    stats.events = workload.stream.size();
    stats.repeats = repeats;
    require(stats.events > 0, "benchmark workload is empty");

    std::vector<double> seconds;
    seconds.reserve(static_cast<std::size_t>(repeats));
    Network net(cfg.net, workload.model.kernels);
    std::vector<SpikeRecord> sink;
    for (int rep = 0; rep < repeats; ++rep) {
        net.clear();
        sink.clear();
        const auto t0 = std::chrono::steady_clock::now();
        for (const Event& e : workload.stream) net.process(e, &sink);
        const auto t1 = std::chrono::steady_clock::now();
        seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        if (rep == 0) stats.report = net.report();
    }
    std::sort(seconds.begin(), seconds.end());
    const std::size_t n = seconds.size();
    stats.median_seconds = n % 2 == 1 ? seconds[n / 2] : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
    stats.events_per_second = static_cast<double>(stats.events) / stats.median_seconds;
    return stats;
}

fs::path cmd_bench(const RunConfig& cfg) {
    const BenchWorkload workload = build_bench_workload(cfg);
    const int repeats = std::max(3, cfg.bench_repeats);
    if (repeats != cfg.bench_repeats) log::info("benchmark repeats raised to the minimum of 3");
    const BenchStats stats = run_bench_passes(cfg, workload, repeats);

    const fs::path dir = prepare_run_dir(cfg);
    const double n = static_cast<double>(stats.report.input_events);
    std::ostringstream os;
    os << "events: " << stats.events << '\n'
       << "repeats: " << stats.repeats << '\n'
       << "median_seconds: " << fmt_double(stats.median_seconds) << '\n'
       << "events_per_second: " << fmt_double(stats.events_per_second) << '\n'
       << "s1_activations_per_event: " << fmt_double(stats.report.s1_activations / n) << '\n'
       << "c1_activations_per_event: " << fmt_double(stats.report.c1_total() / n) << '\n'
       << "s2_activations_per_event: " << fmt_double(stats.report.s2_ff_activations / n) << '\n'
       << "s2_resets_counted_per_event: " << fmt_double(stats.report.s2_reset_counted / n) << '\n';
    write_file(dir / "bench.txt", os.str());
    write_file(dir / "report.txt", format_report_text(stats.report));
    write_file(dir / "report.csv", report_csv_header() + report_csv_row(stats.report));

    std::printf("throughput: %.0f events/s (%llu events, median of %d runs)\n", stats.events_per_second,
                static_cast<unsigned long long>(stats.events), stats.repeats);
    return dir;
}

} // namespace hfirst
