#pragma once

#include <array>
#include <string_view>

#include "gate/imgcore/image.hpp"

namespace gate::synth {

/// 5x7 bitmap digits; each row is 5 bits, MSB on the left.
inline const std::array<std::uint8_t, 7>& glyph_rows(char c) {
  static const std::array<std::array<std::uint8_t, 7>, 10> digits = {{
      {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},
      {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
      {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},
      {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},
      {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},
      {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},
      {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},
      {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},
      {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},
      {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},
  }};
  if (c < '0' || c > '9') throw Error(Errc::invalid_argument, std::string("font has no glyph for '") + c + "'");
  return digits[static_cast<std::size_t>(c - '0')];
}

/// Draws a glyph with cell size (sx, sy) per font pixel at (x, y); returns the inked box.
inline BBox draw_glyph(GrayImage& img, char c, int x, int y, int sx, int sy, std::uint8_t ink) {
  const auto& rows = glyph_rows(c);
  BBox inked;
  for (int r = 0; r < 7; ++r) {
    for (int col = 0; col < 5; ++col) {
      if (!((rows[static_cast<std::size_t>(r)] >> (4 - col)) & 1)) continue;
      const BBox cell{x + col * sx, y + r * sy, sx, sy};
      for (int yy = cell.y; yy < cell.bottom(); ++yy)
        for (int xx = cell.x; xx < cell.right(); ++xx)
          if (img.in_bounds(xx, yy)) img(xx, yy) = ink;
      inked = unite(inked, cell);
    }
  }
  return intersect(inked, img.bounds());
}

}  // namespace gate::synth
