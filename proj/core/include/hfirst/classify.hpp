#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfirst/dataset.hpp"
#include "hfirst/network.hpp"
#include "hfirst/training.hpp"

namespace hfirst {

/// Per-class S2 spike counts and their normalized probabilities.
/// All probabilities are 0 when no class spiked.
struct ClassScores {
    std::vector<std::uint64_t> n;
    std::vector<double> p;
};

/// n_i / sum(n); all zeros when sum(n) = 0.
std::vector<double> soft_scores(const std::vector<std::uint64_t>& n);

/// Argmax over counts, ties broken by lowest index; -1 when all counts are
/// zero (no decision).
int hard_decision(const std::vector<std::uint64_t>& n);

/// Count S2 spikes per class channel in a spike stream.
std::vector<std::uint64_t> s2_counts(const std::vector<SpikeRecord>& spikes, std::size_t num_classes);

ClassScores classify_soft(const std::vector<SpikeRecord>& spikes, std::size_t num_classes);
int classify_hard(const std::vector<SpikeRecord>& spikes, std::size_t num_classes);

struct ExampleResult {
    std::string id;
    std::string true_label;
    std::string pred_label; // empty when the network produced no S2 spikes
    bool correct = false;
    std::uint64_t n_total = 0; // total S2 spikes over the recording
};

struct EvalResult {
    std::vector<ExampleResult> examples;
    double accuracy = 0.0;
    /// Secondary metric: every (example, class) pair is read as a binary
    /// detector output (the argmax class is the sole positive) and scored
    /// against the true label.
    double negative_response_accuracy = 0.0;
    ActivationReport report; // summed over examples
};

/// Score each recording over its full duration with a freshly cleared
/// network. Throws ValidationError when a test label is not a model class.
EvalResult evaluate(const TrainedModel& model, const std::vector<Example>& tests, const NetworkConfig& cfg);

struct TrialResult {
    std::uint64_t seed = 0;
    EvalResult eval;
};

struct XvalParams {
    int trials = 10;
    int train_per_class = 1;
    int test_per_class = 1;
    std::uint64_t seed = 1;
    int jobs = 1;
    TrainingParams training;
    double test_jitter_sigma_ms = 0.0; // applied to raw test recordings
};

struct XvalResult {
    std::vector<TrialResult> trials;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0; // sample standard deviation
};

/// Repeated random sub-sampling validation: per trial, a disjoint
/// train/test split per class drawn from the trial seed, train, evaluate.
/// Trials may run on `jobs` threads; results are identical either way.
XvalResult cross_validate(const std::vector<Example>& dataset, const NetworkConfig& cfg, const XvalParams& params);

/// "84.9%±1.9%"-style summary (one decimal, percent).
std::string format_percent_summary(double mean, double stddev);

/// Results CSV: "trial,example_id,true_label,pred_label,n_total" rows, then
/// a "mean,std" summary pair of accuracy lines.
std::string format_results_csv(const std::vector<TrialResult>& trials, double mean, double stddev);

enum class JitterMode : std::uint8_t { train, test };
const char* jitter_mode_name(JitterMode mode);
JitterMode parse_jitter_mode(const std::string& name); // throws ConfigError

struct JitterPoint {
    double sigma_ms = 0.0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
};

/// Run cross_validate at each jitter level. mode=train jitters the
/// stabilized training streams; mode=test jitters the raw test recordings.
/// Sigmas must be non-decreasing.
std::vector<JitterPoint> jitter_sweep(const std::vector<Example>& dataset, const std::vector<double>& sigmas,
                                      JitterMode mode, const NetworkConfig& cfg, const XvalParams& params);

/// Jitter CSV: "sigma_ms,mode,mean_acc,std_acc".
std::string format_jitter_csv(const std::vector<JitterPoint>& points, JitterMode mode);

/// One S2 spike read as a localized class detection.
struct Detection {
    std::uint64_t t = 0;
    std::string label;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::uint16_t channel = 0; // class index
};

/// Run the network over a continuous stream (no per-object clearing) and
/// emit every S2 spike as a detection, in time order.
std::vector<Detection> stream_detections(const TrainedModel& model, const std::vector<Event>& events,
                                         const NetworkConfig& cfg);

/// Same columns as the spike CSV, restricted to layer S2.
std::string format_detections_csv(const std::vector<Detection>& detections);

} // namespace hfirst
