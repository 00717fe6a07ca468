#include "hfirst/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include <nlohmann/json.hpp>

#include "hfirst/errors.hpp"

namespace hfirst {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json trajectory_to_json(const TrajectoryInfo& t) {
    return ordered_json{{"start", {t.start.x, t.start.y}},
                        {"velocity", {t.velocity.x, t.velocity.y}},
                        {"duration_ms", t.duration_ms}};
}

TrajectoryInfo trajectory_from_json(const ordered_json& j) {
    TrajectoryInfo t;
    t.start = {j.at("start").at(0).get<double>(), j.at("start").at(1).get<double>()};
    t.velocity = {j.at("velocity").at(0).get<double>(), j.at("velocity").at(1).get<double>()};
    t.duration_ms = j.at("duration_ms").get<double>();
    return t;
}

} // namespace

std::string format_manifest(const Manifest& m) {
    ordered_json j;
    j["geometry"] = {{"width", m.geometry.width}, {"height", m.geometry.height}};
    j["format"] = format_name(m.format);
    j["recordings"] = ordered_json::array();
    for (const RecordingInfo& r : m.recordings) {
        j["recordings"].push_back(ordered_json{{"id", r.id},
                                               {"label", r.label},
                                               {"file", r.file},
                                               {"seed", r.seed},
                                               {"num_events", r.num_events},
                                               {"trajectory", trajectory_to_json(r.trajectory)}});
    }
    return j.dump(2) + "\n";
}

Manifest parse_manifest(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        Manifest m;
        m.geometry.width = j.at("geometry").at("width").get<std::uint16_t>();
        m.geometry.height = j.at("geometry").at("height").get<std::uint16_t>();
        if (m.geometry.width < 1 || m.geometry.height < 1) {
            throw DecodeError("manifest geometry must be at least 1x1");
        }
        m.format = parse_format(j.at("format").get<std::string>());
        for (const auto& rj : j.at("recordings")) {
            RecordingInfo r;
            r.id = rj.at("id").get<std::string>();
            r.label = rj.at("label").get<std::string>();
            r.file = rj.at("file").get<std::string>();
            r.seed = rj.at("seed").get<std::uint64_t>();
            r.num_events = rj.at("num_events").get<std::uint64_t>();
            r.trajectory = trajectory_from_json(rj.at("trajectory"));
            m.recordings.push_back(std::move(r));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("manifest is missing or mistypes a field: ") + e.what());
    }
}

void save_manifest(const Manifest& m, const std::string& path) { write_file(path, format_manifest(m)); }

Manifest load_manifest(const std::string& path) {
    try {
        return parse_manifest(read_file(path));
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

std::vector<Example> load_dataset(const std::string& manifest_path) {
    const Manifest m = load_manifest(manifest_path);
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::vector<Example> out;
    out.reserve(m.recordings.size());
    for (const RecordingInfo& r : m.recordings) {
        Example ex;
        ex.id = r.id;
        ex.label = r.label;
        const std::string file = (base / r.file).string();
        ex.events = read_events_file(file, m.geometry).events;
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<ClassExamples> group_by_label(const std::vector<Example>& examples) {
    std::map<std::string, ClassExamples> groups;
    for (const Example& ex : examples) {
        ClassExamples& g = groups[ex.label];
        g.label = ex.label;
        g.recordings.push_back(ex.events);
    }
    std::vector<ClassExamples> out;
    out.reserve(groups.size());
    for (auto& [label, g] : groups) out.push_back(std::move(g));
    return out;
}

} // namespace hfirst
