#pragma once

#include <string>

#include "hfirst/training.hpp"

namespace hfirst {

/// Text model format (human-diffable):
///   hfirst-model v1
///   digest <16 hex digits>
///   geometry <width> <height>
///   kernel <window> <channels>
///   classes <count>
/// then per class a "class <label>" line followed by window*window lines of
/// <channels> integers (positions x-major, then y; channels last).
std::string format_model(const TrainedModel& model);

/// Inverse of format_model. Throws DecodeError naming the offending line.
TrainedModel parse_model(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path); // IoError
TrainedModel load_model(const std::string& path);                    // IoError / DecodeError

} // namespace hfirst
