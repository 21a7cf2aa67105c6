#pragma once

// Side view of a wagon as seen by the lower line-scan camera: a body panel spanning the
// whole mosaic, vertical ribs, undercarriage with wheels, the painted 12-digit identifier
// and unrelated blobs (placards, bolts, stains).

#include <random>
#include <vector>

#include "gate/synth/font.hpp"
#include "gate/synth/raster_draw.hpp"
#include "gate/synth/scenario.hpp"

namespace gate::synth {

struct SideMosaic {
  GrayImage image;
  std::vector<BBox> glyph_boxes;  ///< ground truth, left to right
  BBox id_box;
  std::string wagon_id;
  int distractors = 0;
};

inline SideMosaic render_side_mosaic(const ScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto uint = [&rng](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  const int W = spec.side_width;
  const int H = spec.side_height;
  constexpr std::uint8_t kBody = 110;
  SideMosaic out;
  out.image = GrayImage(W, H, kBody);
  GrayImage& img = out.image;

  const int body_bottom = static_cast<int>(0.78 * H);
  fill_rect(img, {0, body_bottom, W, H - body_bottom}, 45);
  // Rail.
  fill_rect(img, {0, H - static_cast<int>(0.03 * H), W, static_cast<int>(0.015 * H)}, 150);
  // Wheels (closed blobs in the undercarriage).
  const double wheel_r = 0.07 * H;
  for (double wx : {0.12, 0.24, 0.76, 0.88}) {
    fill_ellipse(img, wx * W, body_bottom + 0.11 * H, wheel_r, wheel_r, 15);
  }

  // Ribs split the body into panels.
  std::vector<int> ribs;
  const int rib_w = std::max(6, H / 80);
  for (int x = uint(300, 700); x < W - 200; x += uint(1150, 1450)) {
    ribs.push_back(x);
    fill_rect(img, {x, 0, rib_w, body_bottom}, 145);
  }

  // Identifier: groups of 2-2-4-3-1 digits inside a panel wide enough to hold it.
  out.wagon_id = spec.resolved_wagon_id();
  const int s = spec.glyph_scale;
  const int sx = std::max(1, static_cast<int>(std::lround(s * spec.speed_stretch)));
  const int glyph_w = 5 * sx;
  const int gap = std::max(10, 2 * sx + 2);
  const int group_gap = gap + 3 * sx;
  int id_width = 12 * glyph_w + 11 * gap + 4 * (group_gap - gap);
  std::vector<std::pair<int, int>> panels;  // [x0, x1)
  {
    int prev = 0;
    for (int r : ribs) {
      panels.emplace_back(prev, r);
      prev = r + rib_w;
    }
    panels.emplace_back(prev, W);
  }
  std::vector<std::pair<int, int>> fitting;
  for (auto p : panels)
    if (p.second - p.first >= id_width + 120) fitting.push_back(p);
  if (fitting.empty()) throw Error(Errc::invalid_argument, "side mosaic too narrow for the identifier");
  const auto panel = fitting[static_cast<std::size_t>(uint(0, static_cast<int>(fitting.size()) - 1))];
  const int id_x = uint(panel.first + 60, panel.second - 60 - id_width);
  const int id_y = uint(static_cast<int>(0.15 * H), static_cast<int>(0.62 * H) - 7 * s);
  constexpr std::uint8_t kInk = 228;
  int x = id_x;
  const int group_ends[] = {1, 3, 7, 10};  // last index of each group but the final digit
  for (int i = 0; i < 12; ++i) {
    out.glyph_boxes.push_back(draw_glyph(img, out.wagon_id[static_cast<std::size_t>(i)], x, id_y, sx, s, kInk));
    int step = glyph_w + gap;
    if (std::find(std::begin(group_ends), std::end(group_ends), i) != std::end(group_ends)) step = glyph_w + group_gap;
    if (i == spec.touching_pair) step = glyph_w;  // next glyph starts where this one ends
    x += step;
  }
  for (const auto& g : out.glyph_boxes) out.id_box = unite(out.id_box, g);

  // Distractors are spread along the wagon: one per equal-width slot, jittered inside it,
  // clear of the ribs and of a guard zone around the identifier.
  const BBox guard{out.id_box.x - 300, out.id_box.y - 120, out.id_box.w + 600, out.id_box.h + 240};
  const int slots = spec.distractors + 8;
  int placed = 0;
  for (int slot = 0, tries = 0; placed < spec.distractors && slot < slots; ++tries) {
    if (tries == 40) {
      ++slot, tries = 0;
      continue;
    }
    const int kind = uint(0, 3);
    const int bw = kind == 1 ? uint(12, 34) : uint(22, 90);
    const int bh = kind == 1 ? bw : uint(18, 70);
    const int sx0 = static_cast<int>(static_cast<long long>(slot) * W / slots);
    const int sx1 = static_cast<int>(static_cast<long long>(slot + 1) * W / slots);
    const int lo = std::max(20, sx0);
    const int hi = std::min(W - bw - 20, sx1 - bw);
    if (hi < lo) continue;
    const BBox box{uint(lo, hi), uint(20, body_bottom - bh - 20), bw, bh};
    if (intersect(box, guard).area() > 0) continue;
    bool near_rib = false;
    for (int r : ribs) near_rib |= box.x < r + rib_w + 25 && box.right() > r - 25;
    if (near_rib) continue;
    const std::uint8_t v = uint(0, 1) ? static_cast<std::uint8_t>(uint(20, 60)) : static_cast<std::uint8_t>(uint(170, 230));
    switch (kind) {
      case 0: fill_rect(img, box, v); break;
      case 1: fill_ellipse(img, box.x + bw / 2.0, box.y + bh / 2.0, bw / 2.0, bh / 2.0, v); break;
      case 2: {  // placard with border
        fill_rect(img, box, v);
        fill_rect(img, {box.x + 4, box.y + 4, std::max(1, bw - 8), std::max(1, bh - 8)}, kBody);
        break;
      }
      default: fill_ellipse(img, box.x + bw / 2.0, box.y + bh / 2.0, bw / 2.0, bh / 3.0, v); break;
    }
    ++placed;
    ++slot, tries = -1;
  }
  out.distractors = placed;

  add_gaussian_noise(img, spec.noise_sigma, rng);
  return out;
}

}  // namespace gate::synth
