#pragma once

#include <string>
#include <vector>

#include "hfirst/event.hpp"

namespace hfirst {

/// The 36 built-in class labels: digits then uppercase letters.
const std::vector<std::string>& glyph_labels();

/// True if `label` is a single character from the built-in set.
bool is_glyph_label(const std::string& label);

/// Rasterize one built-in 5x7 glyph into a sprite. Each font pixel becomes a
/// scale x scale block of `ink` intensity on `background`.
Sprite glyph_sprite(char c, int scale = 4, double ink = 3.0, double background = 1.0);

} // namespace hfirst
