#pragma once

#include <filesystem>

#include "hfirst/classify.hpp"
#include "hfirst/config.hpp"
#include "hfirst/dataset.hpp"

namespace hfirst {

/// <out>/<digest8>-s<seed>; reruns of the same config overwrite in place.
std::filesystem::path run_dir(const RunConfig& cfg);

/// Create the run directory and write the canonical config echo into it.
std::filesystem::path prepare_run_dir(const RunConfig& cfg);

struct SynthRecording {
    RecordingInfo info;
    std::vector<Event> events;
};

/// Deterministic single-recording generator shared by cmd_synth, cmd_bench
/// and in-memory protocol runs; (seed, class index, recording index) fully
/// determine the output.
SynthRecording synth_recording(const RunConfig& cfg, const std::string& label, std::size_t class_index,
                               int recording_index);

/// The full default dataset, in memory (same streams cmd_synth writes).
std::vector<Example> synth_dataset_memory(const RunConfig& cfg);

/// Each command returns its run directory; failures raise hfirst errors.
std::filesystem::path cmd_synth(const RunConfig& cfg);
std::filesystem::path cmd_train(const RunConfig& cfg);
std::filesystem::path cmd_eval(const RunConfig& cfg);
std::filesystem::path cmd_xval(const RunConfig& cfg);
std::filesystem::path cmd_jitter(const RunConfig& cfg);
std::filesystem::path cmd_stream(const RunConfig& cfg);
std::filesystem::path cmd_ablate(const RunConfig& cfg);
std::filesystem::path cmd_bench(const RunConfig& cfg);

struct BenchWorkload {
    std::vector<Event> stream;
    TrainedModel model;
};

/// Build the benchmark input: recordings + model from cfg.dataset/cfg.model
/// when given, otherwise a self-synthesized one-recording-per-class set.
BenchWorkload build_bench_workload(const RunConfig& cfg);

struct BenchStats {
    std::uint64_t events = 0;
    int repeats = 0;
    double median_seconds = 0.0;
    double events_per_second = 0.0;
    ActivationReport report; // tallies of one pass (identical across passes)
};

/// Time `repeats` full passes of the cascade over the workload; the reported
/// throughput is the median pass.
BenchStats run_bench_passes(const RunConfig& cfg, const BenchWorkload& workload, int repeats);

} // namespace hfirst
