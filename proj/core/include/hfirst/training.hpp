#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfirst/event.hpp"
#include "hfirst/network.hpp"
#include "hfirst/synth.hpp"

namespace hfirst {

/// Exponentially smoothed activity centroid over an event stream.
/// update() returns the centroid after folding in the event.
struct Tracker {
    double alpha = 0.05;
    double cx = 0.0;
    double cy = 0.0;
    std::uint64_t count = 0;

    Vec2 update(const Event& e) {
        if (count == 0) {
            cx = e.x;
            cy = e.y;
        } else {
            cx = (1.0 - alpha) * cx + alpha * e.x;
            cy = (1.0 - alpha) * cy + alpha * e.y;
        }
        ++count;
        return {cx, cy};
    }
};

/// Per-event tracker centroids (diagnostics; same dynamics as stabilization).
std::vector<Vec2> track_centroids(const std::vector<Event>& events, double alpha);

/// Re-center a recording of one moving object into a static window x window
/// view: each event updates the centroid, is shifted by the rounded centroid
/// to the window center, and is dropped if it lands outside. Timestamps are
/// unchanged. Throws TrainError on an empty input stream.
std::vector<Event> track_and_stabilize(const std::vector<Event>& events, double alpha = 0.05, int window = 32);

/// C1 spike counts per pooled position and orientation channel, laid out
/// x-major to match S2Kernel: counts[(x*height + y)*channels + c].
struct C1CountGrid {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint32_t> counts;

    std::uint32_t& at(int x, int y, int c) { return counts[static_cast<std::size_t>((x * height + y) * channels + c)]; }
    std::uint32_t at(int x, int y, int c) const {
        return counts[static_cast<std::size_t>((x * height + y) * channels + c)];
    }
    std::uint64_t total() const;
};

/// Count feature responses to a stabilized stream on a window x window field:
/// normally C1 spikes per (x, y, orientation) with lateral resets forced on;
/// with bypass_s1, single-channel C1 spikes; with bypass_s1_c1, raw event
/// counts per pixel. Grid shape follows the mode (w/4 x h/4 x orientations,
/// w/4 x h/4 x 1, or window x window x 1).
C1CountGrid count_c1(const std::vector<Event>& stabilized, const NetworkConfig& cfg, int window = 32);

/// Turn a count grid into a class kernel: weights L2-normalized to 100 and
/// rounded (clamped to >= 1 on support), zero-count entries set to -1.
/// Throws TrainError naming the class when all counts are zero.
S2Kernel make_s2_kernel(const C1CountGrid& counts, const std::string& label);

struct TrainingParams {
    double alpha = 0.05;          // tracker smoothing
    int window = 32;              // stabilized view size, pixels
    double gap_ms = 100.0;        // quiet gap between concatenated examples
    double jitter_sigma_ms = 0.0; // timing jitter applied to stabilized streams
    std::uint64_t jitter_seed = 0;
};

struct ClassExamples {
    std::string label;
    std::vector<std::vector<Event>> recordings;
};

struct TrainedModel {
    std::uint64_t digest = 0; // of the network config used for training
    SensorGeometry geometry{};
    std::vector<S2Kernel> kernels;

    std::vector<std::string> labels() const;
    /// Index of `label` in kernels, or -1.
    int class_index(const std::string& label) const;
};

/// Build one kernel per class: stabilize each recording, concatenate them
/// with a quiet gap, count features, normalize. Duplicate labels, empty
/// classes, or a class yielding zero counts raise TrainError.
TrainedModel train_classes(const std::vector<ClassExamples>& classes, const NetworkConfig& cfg,
                           const TrainingParams& params);

} // namespace hfirst
