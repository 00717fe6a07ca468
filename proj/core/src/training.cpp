#include "hfirst/training.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hfirst/errors.hpp"
#include "hfirst/log.hpp"
#include "hfirst/perturb.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

std::vector<Vec2> track_centroids(const std::vector<Event>& events, double alpha) {
    Tracker tracker{alpha};
    std::vector<Vec2> out;
    out.reserve(events.size());
    for (const Event& e : events) out.push_back(tracker.update(e));
    return out;
}

std::vector<Event> track_and_stabilize(const std::vector<Event>& events, double alpha, int window) {
    if (events.empty()) throw TrainError("cannot stabilize an empty event stream");
    if (alpha <= 0.0 || alpha > 1.0) throw ValidationError("tracker alpha must be in (0, 1]");
    if (window < 1) throw ValidationError("stabilization window must be positive");

    Tracker tracker{alpha};
    const int half = window / 2;
    std::vector<Event> out;
    out.reserve(events.size());
    for (const Event& e : events) {
        const Vec2 c = tracker.update(e);
        const long long nx = e.x - round_half_away(c.x) + half;
        const long long ny = e.y - round_half_away(c.y) + half;
        if (nx < 0 || nx >= window || ny < 0 || ny >= window) continue;
        out.push_back({e.t, static_cast<std::uint16_t>(nx), static_cast<std::uint16_t>(ny), e.p});
    }
    return out;
}

std::uint64_t C1CountGrid::total() const {
    std::uint64_t sum = 0;
    for (std::uint32_t c : counts) sum += c;
    return sum;
}

C1CountGrid count_c1(const std::vector<Event>& stabilized, const NetworkConfig& cfg, int window) {
    if (window < 4) throw ValidationError("counting window must be at least 4 pixels");

    C1CountGrid grid;
    if (cfg.bypass_s1_c1) {
        // Raw per-pixel event counts: the direct-to-template path has no
        // feature layer, so the input spikes themselves are the features.
        grid.width = window;
        grid.height = window;
        grid.channels = 1;
        grid.counts.assign(static_cast<std::size_t>(window) * window, 0);
        for (const Event& e : stabilized) {
            if (cfg.polarity == PolarityPolicy::on_only && e.p == 0) continue;
            if (cfg.polarity == PolarityPolicy::off_only && e.p == 1) continue;
            if (e.x >= window || e.y >= window) {
                throw ValidationError("stabilized event at (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                                      ") is outside the " + std::to_string(window) + "-pixel training window");
            }
            ++grid.at(e.x, e.y, 0);
        }
        return grid;
    }

    NetworkConfig tc = cfg;
    tc.geometry = SensorGeometry{static_cast<std::uint16_t>(window), static_cast<std::uint16_t>(window)};
    tc.disable_c1_reset = false; // feature statistics always use the competitive path
    Network net(tc, {});
    std::vector<SpikeRecord> spikes;
    for (const Event& e : stabilized) net.process(e, &spikes);

    grid.width = net.c1_width();
    grid.height = net.c1_height();
    grid.channels = net.c1_channels();
    grid.counts.assign(static_cast<std::size_t>(grid.width) * grid.height * grid.channels, 0);
    for (const SpikeRecord& s : spikes) {
        if (s.layer == Layer::c1) ++grid.at(s.x, s.y, s.channel);
    }
    return grid;
}

S2Kernel make_s2_kernel(const C1CountGrid& counts, const std::string& label) {
    if (counts.width != counts.height) {
        throw ValidationError("count grid for class '" + label + "' is not square");
    }
    double sum_sq = 0.0;
    for (std::uint32_t c : counts.counts) sum_sq += static_cast<double>(c) * c;
    if (sum_sq == 0.0) {
        throw TrainError("class '" + label + "': training produced no feature counts");
    }
    const double norm = std::sqrt(sum_sq);

    S2Kernel kernel;
    kernel.label = label;
    kernel.window = counts.width;
    kernel.channels = counts.channels;
    kernel.w.resize(counts.counts.size());
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
        const std::uint32_t c = counts.counts[i];
        if (c == 0) {
            kernel.w[i] = -1;
        } else {
            const long long w = round_half_away(100.0 * c / norm);
            kernel.w[i] = static_cast<std::int16_t>(std::max(1LL, w));
        }
    }
    return kernel;
}

std::vector<std::string> TrainedModel::labels() const {
    std::vector<std::string> out;
    out.reserve(kernels.size());
    for (const S2Kernel& k : kernels) out.push_back(k.label);
    return out;
}

int TrainedModel::class_index(const std::string& label) const {
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        if (kernels[i].label == label) return static_cast<int>(i);
    }
    return -1;
}

TrainedModel train_classes(const std::vector<ClassExamples>& classes, const NetworkConfig& cfg,
                           const TrainingParams& params) {
    if (classes.empty()) throw TrainError("no classes to train");
    if (params.gap_ms < 0.0) throw ValidationError("concatenation gap must be non-negative");

    std::set<std::string> seen;
    for (const ClassExamples& c : classes) {
        if (!seen.insert(c.label).second) throw TrainError("duplicate class label '" + c.label + "'");
        if (c.recordings.empty()) throw TrainError("class '" + c.label + "' has no training recordings");
    }

    const auto gap_us = static_cast<std::uint64_t>(round_half_away(params.gap_ms * 1000.0));

    TrainedModel model;
    model.digest = config_digest(cfg);
    model.geometry = cfg.geometry;
    model.kernels.reserve(classes.size());

    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const ClassExamples& cls = classes[ci];
        std::vector<Event> combined;
        for (std::size_t ri = 0; ri < cls.recordings.size(); ++ri) {
            std::vector<Event> stab = track_and_stabilize(cls.recordings[ri], params.alpha, params.window);
            if (params.jitter_sigma_ms > 0.0) {
                stab = add_jitter(stab, params.jitter_sigma_ms, mix64(mix64(params.jitter_seed, ci), ri));
            }
            if (stab.empty()) {
                log::warn("class '" + cls.label + "' recording " + std::to_string(ri) +
                          ": stabilization kept no events");
                continue;
            }
            if (combined.empty()) {
                combined = std::move(stab);
            } else {
                // Shift this example to start one quiet gap after the last.
                const std::uint64_t base = combined.back().t + gap_us;
                const std::uint64_t first = stab.front().t;
                for (Event e : stab) {
                    e.t = base + (e.t - first);
                    combined.push_back(e);
                }
            }
        }
        model.kernels.push_back(make_s2_kernel(count_c1(combined, cfg, params.window), cls.label));
        log::debug("trained class '" + cls.label + "' from " + std::to_string(combined.size()) +
                   " stabilized events");
    }
    return model;
}

} // namespace hfirst
