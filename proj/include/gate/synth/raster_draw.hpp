#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "gate/imgcore/image.hpp"

namespace gate::synth {

inline void fill_rect(GrayImage& img, const BBox& box, std::uint8_t v) {
  const BBox b = intersect(box, img.bounds());
  for (int y = b.y; y < b.bottom(); ++y)
    for (int x = b.x; x < b.right(); ++x) img(x, y) = v;
}

inline void fill_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, std::uint8_t v) {
  const int x0 = static_cast<int>(std::floor(cx - rx)), x1 = static_cast<int>(std::ceil(cx + rx));
  const int y0 = static_cast<int>(std::floor(cy - ry)), y1 = static_cast<int>(std::ceil(cy + ry));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = (x - cx) / rx, dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0 && img.in_bounds(x, y)) img(x, y) = v;
    }
}

/// Thick anti-alias-free segment.
inline void draw_line(GrayImage& img, double x0, double y0, double x1, double y1, double thickness, std::uint8_t v) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2)));
  const double r = thickness / 2;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    fill_ellipse(img, x0 + t * (x1 - x0), y0 + t * (y1 - y0), r, r, v);
  }
}

inline void add_gaussian_noise(GrayImage& img, double sigma, std::mt19937_64& rng) {
  if (sigma <= 0) return;
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& p : img.pixels()) {
    const double v = std::round(p + n(rng));
    p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
}

}  // namespace gate::synth
