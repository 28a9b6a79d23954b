#pragma once

#include <string_view>

#include "terramap/image.hpp"

namespace terramap {

// Built-in 8x8 bitmap font covering printable ASCII; other code points
// render as '?'.
inline constexpr int kGlyphSize = 8;

int text_width(std::string_view utf8, int scale = 1);
void draw_text(Image& target, int x, int y, std::string_view utf8, Rgba color, int scale = 1);

}  // namespace terramap
