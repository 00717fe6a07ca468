#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfirst/aer_io.hpp"
#include "hfirst/event.hpp"
#include "hfirst/synth.hpp"
#include "hfirst/training.hpp"

namespace hfirst {

/// Ground-truth motion of a synthesized recording (sprite top-left corner
/// start, velocity in px/ms, duration in ms).
struct TrajectoryInfo {
    Vec2 start{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
    double duration_ms = 0.0;
};

struct RecordingInfo {
    std::string id;    // unique, e.g. "A_0"
    std::string label; // class label
    std::string file;  // path relative to the manifest
    std::uint64_t seed = 0;
    std::uint64_t num_events = 0;
    TrajectoryInfo trajectory;
};

struct Manifest {
    SensorGeometry geometry{};
    EventFormat format = EventFormat::binary_v1;
    std::vector<RecordingInfo> recordings;
};

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& json_text); // DecodeError on malformed input

void save_manifest(const Manifest& m, const std::string& path);
Manifest load_manifest(const std::string& path);

/// One labeled recording, fully loaded.
struct Example {
    std::string id;
    std::string label;
    std::vector<Event> events;
};

/// Load every recording listed in a manifest (paths resolved relative to the
/// manifest file).
std::vector<Example> load_dataset(const std::string& manifest_path);

/// Group examples per class, classes sorted by label, examples in input
/// order. Suitable as train_classes input.
std::vector<ClassExamples> group_by_label(const std::vector<Example>& examples);

} // namespace hfirst
