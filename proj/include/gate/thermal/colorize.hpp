#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "gate/thermal/mosaic.hpp"

namespace gate::thermal {

// False-colour table: blue -> cyan -> green -> yellow -> red in four 64-entry ramps.
// The console reproduces this table, so the formula must stay integer-exact.
inline Rgb lut_entry(int i) {
  i = std::clamp(i, 0, 255);
  const int seg = i / 64;
  const auto ramp = static_cast<std::uint8_t>((i % 64) * 255 / 63);
  const auto inv = static_cast<std::uint8_t>(255 - ramp);
  switch (seg) {
    case 0: return {0, ramp, 255};
    case 1: return {0, 255, inv};
    case 2: return {ramp, 255, 0};
    default: return {255, inv, 0};
  }
}

inline const std::array<Rgb, 256>& lut() {
  static const std::array<Rgb, 256> table = [] {
    std::array<Rgb, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = lut_entry(i);
    return t;
  }();
  return table;
}

/// floor((clamp(t, lo, hi) - lo) / (hi - lo) * 255)
inline int lut_index(double t, double lo, double hi) {
  if (!(lo < hi)) throw Error(Errc::invalid_argument, "colorize: range_lo must be < range_hi");
  const double c = std::clamp(t, lo, hi);
  return std::clamp(static_cast<int>(std::floor((c - lo) / (hi - lo) * 255.0)), 0, 255);
}

inline RgbImage colorize(const ThermalMosaic& m, double lo, double hi) {
  if (!(lo < hi)) throw Error(Errc::invalid_argument, "colorize: range_lo must be < range_hi");
  const auto& table = lut();
  RgbImage out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) out(x, y) = table[static_cast<std::size_t>(lut_index(m.temps(x, y), lo, hi))];
  return out;
}

/// Default range is the image's own extrema; a flat image gets a 1 °C window so lo < hi holds.
inline RgbImage colorize(const ThermalMosaic& m) {
  const auto px = m.temps.pixels();
  const auto [mn, mx] = std::minmax_element(px.begin(), px.end());
  const double lo = *mn;
  const double hi = *mx > *mn ? static_cast<double>(*mx) : lo + 1.0;
  return colorize(m, lo, hi);
}

}  // namespace gate::thermal
