#include "hfirst/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace hfirst::log {

namespace {

Level parse_env() {
    const char* v = std::getenv("HFIRST_LOG");
    if (!v) return Level::warn;
    std::string s(v);
    if (s == "error") return Level::error;
    if (s == "warn") return Level::warn;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    std::cerr << "[warn] HFIRST_LOG=" << s << " not recognised, using warn\n";
    return Level::warn;
}

Level g_level = parse_env();
std::mutex g_mutex;

const char* tag(Level lv) {
    switch (lv) {
        case Level::error: return "[error] ";
        case Level::warn: return "[warn] ";
        case Level::info: return "[info] ";
        default: return "[debug] ";
    }
}

} // namespace

Level level() { return g_level; }
void set_level(Level lv) { g_level = lv; }

void write(Level lv, const std::string& msg) {
    if (lv > g_level) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << tag(lv) << msg << '\n';
}

} // namespace hfirst::log
