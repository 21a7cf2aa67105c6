#pragma once

// Frontal matrix-camera frames of an approaching wagon: track, catenary and a wagon front
// growing as it nears the portal. A marker stripe sweeps with time so frames are distinct.

#include "gate/synth/raster_draw.hpp"
#include "gate/synth/scenario.hpp"

namespace gate::synth {

inline constexpr int kFrontalW = 640;
inline constexpr int kFrontalH = 480;

inline GrayImage render_frontal_frame(const ScenarioSpec& spec, int index, int total) {
  GrayImage f(kFrontalW, kFrontalH, 150);
  fill_rect(f, {0, kFrontalH / 2, kFrontalW, kFrontalH / 2}, 95);  // ballast
  draw_line(f, 300, 240, 150, 479, 4, 200);                         // rails
  draw_line(f, 340, 240, 490, 479, 4, 200);
  draw_line(f, 0, 40, 639, 40, 2, 60);  // contact wire
  const double t = total > 1 ? static_cast<double>(index) / (total - 1) : 1.0;
  const double s = 0.25 + 0.65 * t;
  const int w = static_cast<int>(300 * s), h = static_cast<int>(340 * s);
  const BBox body{320 - w / 2, 250 - h / 2 - static_cast<int>(30 * s), w, h};
  fill_rect(f, body, 70);
  fill_rect(f, {body.x + w / 8, body.y + h / 6, w * 3 / 4, h / 5}, 40);  // windscreen
  fill_ellipse(f, body.x + w / 6.0, body.bottom() - h / 8.0, w / 20.0, w / 20.0, 240);
  fill_ellipse(f, body.right() - w / 6.0, body.bottom() - h / 8.0, w / 20.0, w / 20.0, 240);
  fill_rect(f, {(index * 37) % kFrontalW, kFrontalH - 12, 24, 12}, 255);
  std::mt19937_64 rng(spec.seed * 131 + static_cast<std::uint64_t>(index));
  add_gaussian_noise(f, 2.0, rng);
  return f;
}

}  // namespace gate::synth
