#pragma once

// Roof-camera imagery: a diamond-frame pantograph drawn as a layer (intensity + coverage),
// the clean template built from it, and roof mosaics with clutter into which the layer is
// composited through a known projective warp.

#include <cmath>
#include <numbers>
#include <random>

#include "gate/pantograph/homography.hpp"
#include "gate/synth/raster_draw.hpp"
#include "gate/synth/scenario.hpp"

namespace gate::synth {

inline constexpr int kTemplateW = 256;
inline constexpr int kTemplateH = 160;
inline constexpr std::uint8_t kRoofTone = 72;

/// Pantograph structure; pixel value 0 means "no structure here".
inline GrayImage pantograph_layer() {
  GrayImage g(kTemplateW, kTemplateH, 0);
  // Collector head: bar, segmented carbon strip, rivets, horns.
  fill_rect(g, {16, 18, 224, 9}, 168);
  for (int x = 40; x < 212; x += 30) fill_rect(g, {x, 12, 26, 6}, 118);
  for (int x = 28; x < 232; x += 22) fill_ellipse(g, x, 22.5, 1.6, 1.6, 82);
  draw_line(g, 17, 22, 4, 42, 4, 160);
  draw_line(g, 239, 22, 252, 44, 4, 160);
  // Head supports with bolts.
  fill_rect(g, {64, 27, 13, 10}, 150);
  fill_rect(g, {180, 27, 13, 10}, 150);
  fill_ellipse(g, 70, 31, 2.2, 2.2, 70);
  fill_ellipse(g, 186, 31, 2.2, 2.2, 70);
  // Upper and lower arms meeting at the knee, with brace clamps.
  draw_line(g, 70, 37, 128, 84, 5, 156);
  draw_line(g, 186, 37, 128, 84, 5, 156);
  draw_line(g, 128, 84, 56, 136, 6, 146);
  draw_line(g, 128, 84, 200, 136, 6, 146);
  for (double t : {0.3, 0.65}) {
    draw_line(g, 70 + t * 58, 37 + t * 47, 70 + t * 58, 37 + t * 47, 7, 96);
    draw_line(g, 128 - t * 72, 84 + t * 52, 128 - t * 72, 84 + t * 52, 8, 100);
  }
  fill_ellipse(g, 128, 84, 7.5, 7.5, 174);
  fill_ellipse(g, 128, 84, 2.5, 2.5, 60);
  // Damper on one side only (breaks the left/right symmetry).
  draw_line(g, 150, 101, 206, 128, 3, 178);
  fill_rect(g, {176, 110, 16, 8}, 128);
  // Shunt cable from the knee down to the frame.
  for (int i = 0; i < 12; ++i) {
    const double a = i / 12.0, b = (i + 1) / 12.0;
    draw_line(g, 122 - 40 * a, 92 + 44 * a + 10 * std::sin(a * std::numbers::pi), 122 - 40 * b,
              92 + 44 * b + 10 * std::sin(b * std::numbers::pi), 2, 118);
  }
  // Spring box with coil.
  fill_rect(g, {80, 121, 24, 15}, 162);
  for (int i = 0; i < 4; ++i) draw_line(g, 82 + 5.5 * i, 123, 85 + 5.5 * i, 134, 1.5, 104);
  // Base frame, bolts, rating plate and insulators.
  fill_rect(g, {36, 136, 184, 10}, 138);
  for (int x : {60, 104, 152, 196}) fill_ellipse(g, x, 141, 2, 2, 70);
  fill_rect(g, {120, 138, 22, 6}, 190);
  for (int x = 122; x < 140; x += 4) fill_rect(g, {x, 139, 2, 4}, 92);
  for (int cx : {48, 208})
    for (int k = 0; k < 3; ++k) {
      fill_ellipse(g, cx, 149.5 + 4 * k, 7.5, 2.3, 174);
      fill_rect(g, {cx - 3, 151 + 4 * k, 7, 2}, 112);
    }
  return g;
}

inline GrayImage pantograph_template() {
  GrayImage layer = pantograph_layer();
  GrayImage t(kTemplateW, kTemplateH, kRoofTone);
  for (int y = 0; y < t.height(); ++y)
    for (int x = 0; x < t.width(); ++x)
      if (layer(x, y)) t(x, y) = layer(x, y);
  return t;
}

struct RoofScene {
  GrayImage image;
  bool present = false;
  pantograph::Homography H = pantograph::Homography::Identity();  ///< template -> scene
  BBox truth;  ///< bound of the warped template corners, clipped to the scene
};

inline pantograph::Homography pantograph_warp(const ScenarioSpec& spec) {
  const auto& p = spec.pantograph;
  const double cx = p.position * spec.roof_width;
  const double cy = spec.roof_height / 2.0;
  Eigen::Matrix3d to_centre, scale, shear, persp, place;
  to_centre << 1, 0, -kTemplateW / 2.0, 0, 1, -kTemplateH / 2.0, 0, 0, 1;
  scale << p.scale, 0, 0, 0, p.scale, 0, 0, 0, 1;
  shear << 1, std::tan(p.shear_deg * std::numbers::pi / 180.0), 0, 0, 1, 0, 0, 0, 1;
  persp << 1, 0, 0, 0, 1, 0, p.perspective, 0, 1;
  place << 1, 0, cx, 0, 1, cy, 0, 0, 1;
  pantograph::Homography H = place * persp * shear * scale * to_centre;
  return H / H(2, 2);
}

inline BBox warped_bounds(const pantograph::Homography& H, int w, int h, const BBox& clip) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (auto c : {pantograph::Vec2{0, 0}, pantograph::Vec2{double(w), 0}, pantograph::Vec2{double(w), double(h)},
                 pantograph::Vec2{0, double(h)}}) {
    const auto p = *pantograph::apply(H, c);
    x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
  }
  const int ix = static_cast<int>(std::floor(x0)), iy = static_cast<int>(std::floor(y0));
  return intersect({ix, iy, static_cast<int>(std::ceil(x1)) - ix, static_cast<int>(std::ceil(y1)) - iy}, clip);
}

inline RoofScene render_roof_scene(const ScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed * 0xd1b54a32d192ed03ULL + 0x7f);
  auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto uint = [&rng](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  const int W = spec.roof_width, H = spec.roof_height;
  const auto tone = static_cast<std::uint8_t>(uint(kRoofTone - 8, kRoofTone + 8));
  RoofScene out;
  out.image = GrayImage(W, H, tone);
  GrayImage& img = out.image;

  const auto& pg = spec.pantograph;
  out.present = pg.present;
  BBox guard{};
  if (pg.present) {
    out.H = pantograph_warp(spec);
    out.truth = warped_bounds(out.H, kTemplateW, kTemplateH, img.bounds());
    guard = {out.truth.x - 24, out.truth.y - 24, out.truth.w + 48, out.truth.h + 48};
  }

  // Roof sheet seams and the longitudinal walkway edges.
  for (int x = uint(40, 160); x < W; x += uint(170, 230)) fill_rect(img, {x, 0, 3, H}, static_cast<std::uint8_t>(tone - 22));
  fill_rect(img, {0, H / 8, W, 2}, static_cast<std::uint8_t>(tone + 18));
  fill_rect(img, {0, H - H / 8, W, 2}, static_cast<std::uint8_t>(tone + 18));

  // Clutter: vents, hatches, cable runs and rivet rows, kept off the pantograph footprint.
  const int items = std::max(6, W / 110);
  for (int i = 0, tries = 0; i < items && tries < 400; ++tries) {
    const int kind = uint(0, 3);
    const int w = uint(30, 110), h = uint(20, 80);
    const BBox b{uint(0, W - w), uint(0, H - h), w, h};
    if (!intersect(b, guard).empty()) continue;
    ++i;
    const auto v = static_cast<std::uint8_t>(uint(0, 1) ? uint(40, 70) : uint(120, 150));
    switch (kind) {
      case 0:
        fill_rect(img, b, v);
        fill_rect(img, {b.x + 4, b.y + 4, b.w - 8, b.h - 8}, tone);
        break;
      case 1:
        fill_rect(img, b, v);
        for (int k = b.x + 6; k < b.right() - 4; k += 8) fill_rect(img, {k, b.y + 3, 3, b.h - 6}, tone);
        break;
      case 2:
        draw_line(img, b.x, b.y + b.h / 2.0, b.right(), b.y + b.h / 2.0 + uni(-10, 10), uni(2, 5), v);
        break;
      default:
        for (int k = b.x; k < b.right(); k += 9) fill_ellipse(img, k, b.y + b.h / 2.0, 1.8, 1.8, v);
        break;
    }
  }

  if (pg.present) {
    // Premultiplied bilinear compositing of the structure layer through the inverse warp.
    const GrayImage layer = pantograph_layer();
    const pantograph::Homography Hinv = out.H.inverse();
    auto sample = [&layer](double x, double y, bool cover) {
      const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
      const double fx = x - x0, fy = y - y0;
      double acc = 0;
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
          const int sx = x0 + dx, sy = y0 + dy;
          if (!layer.in_bounds(sx, sy)) continue;
          const double v = cover ? (layer(sx, sy) ? 1.0 : 0.0) : layer(sx, sy);
          acc += v * (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy);
        }
      return acc;
    };
    for (int y = out.truth.y; y < out.truth.bottom(); ++y)
      for (int x = out.truth.x; x < out.truth.right(); ++x) {
        const auto s = pantograph::apply(Hinv, {x + 0.5, y + 0.5});
        if (!s) continue;
        const double tx = s->x - 0.5, ty = s->y - 0.5;
        if (tx < -1 || ty < -1 || tx > kTemplateW || ty > kTemplateH) continue;
        const double a = sample(tx, ty, true);
        if (a <= 0) continue;
        const double v = (1 - a) * img(x, y) + pg.gain * sample(tx, ty, false);
        img(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
      }
  }
  add_gaussian_noise(img, spec.roof_noise_sigma, rng);
  return out;
}

}  // namespace gate::synth
