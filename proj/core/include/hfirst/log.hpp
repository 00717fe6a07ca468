#pragma once

#include <string>

namespace hfirst::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Active level. Initialised once from the HFIRST_LOG environment variable
/// (error|warn|info|debug, default warn); can be overridden in-process.
Level level();
void set_level(Level lv);

void write(Level lv, const std::string& msg);

inline void error(const std::string& msg) { write(Level::error, msg); }
inline void warn(const std::string& msg) { write(Level::warn, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }
inline void debug(const std::string& msg) { write(Level::debug, msg); }

} // namespace hfirst::log
