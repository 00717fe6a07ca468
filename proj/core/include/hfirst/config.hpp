#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfirst/aer_io.hpp"
#include "hfirst/network.hpp"
#include "hfirst/training.hpp"

namespace hfirst {

/// Knobs of the built-in dataset generator: one glyph sprite crossing the
/// field of view per recording.
struct DatasetParams {
    std::vector<std::string> labels;  // empty = all 36 built-in glyphs
    int recordings_per_class = 2;
    int glyph_scale = 4;              // font pixel -> sprite pixels
    double ink = 3.0;                 // glyph intensity (background 1.0)
    double background = 1.0;
    double contrast_threshold = 0.35; // pixel log-intensity step per event
    double speed_px_per_ms = 1.0;
    double speed_jitter = 0.08;       // fractional horizontal speed spread
    double vy_jitter = 0.02;          // vertical velocity spread, px/ms
    double y_jitter_px = 8.0;         // vertical start position spread
    double step_px = 0.125;           // generator sampling step
    double threshold_mismatch = 0.0;  // per-pixel threshold spread (fraction)
    double pixel_refractory_ms = 0.0; // per-pixel dead time after an event
    double latency_jitter_ms = 0.0;   // per-event Gaussian response latency
    double blur_sigma_px = 0.0;       // optical point-spread sigma
    double rotation_jitter_deg = 0.0; // uniform per-recording tilt range (+/-)
    double noise_rate_per_s = 0.0;    // background noise events per second
};

/// Full configuration of one command run: network, training, generator and
/// protocol settings plus paths. Parsed from key=value lines and CLI flags.
struct RunConfig {
    NetworkConfig net;
    TrainingParams training;
    DatasetParams data;

    int trials = 10;
    int train_per_class = 1;
    int test_per_class = 1;
    std::vector<double> jitter_sigmas = {0.0, 5.0, 10.0};
    std::string jitter_mode = "test";
    bool ablate_bypass = false; // add bypass variants to cmd_ablate
    int bench_repeats = 3;

    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out = "runs";
    EventFormat format = EventFormat::binary_v1;

    std::string dataset; // manifest path (train/eval/xval/jitter/ablate)
    std::string model;   // model path (eval/stream)
    std::string input;   // event stream path (stream)
};

/// All recognized keys in canonical order (the dump order).
std::vector<std::string> config_keys();

/// Set one key; throws ConfigError on an unknown key or unparsable value.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

/// Apply a "key=value" string (as given to --set).
void apply_kv_line(RunConfig& cfg, const std::string& line);

/// Parse key=value lines ('#' comments and blank lines ignored) on top of
/// defaults / an existing config.
RunConfig parse_config_text(const std::string& text);
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Canonical echo containing every key; parse_config_text round-trips it.
std::string dump_config(const RunConfig& cfg);

/// Digest of the canonical dump; names run directories.
std::uint64_t run_digest(const RunConfig& cfg);

/// "<digest8>-s<seed>", the run directory leaf name.
std::string run_dir_name(const RunConfig& cfg);

/// data.labels with the empty default expanded to the built-in glyph set.
std::vector<std::string> effective_labels(const DatasetParams& data);

} // namespace hfirst
