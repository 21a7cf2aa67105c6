#pragma once

#include <cmath>
#include <vector>

#include "gate/imgcore/image.hpp"

namespace gate {

/// Half-widths of the discrete disk {(dx,dy) : dx^2 + dy^2 <= r^2}, indexed by dy + r.
inline std::vector<int> disk_half_widths(int radius) {
  std::vector<int> hw(2 * radius + 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    int w = 0;
    while ((w + 1) * (w + 1) + dy * dy <= radius * radius) ++w;
    hw[dy + radius] = w;
  }
  return hw;
}

/// Dilation by a Euclidean disk of radius r; pixels outside the image are background.
inline BinaryImage dilate_disk(const BinaryImage& img, int radius) {
  if (radius < 0) throw Error(Errc::invalid_argument, "dilation radius must be >= 0");
  if (radius == 0) return img;
  const int W = img.width();
  const int H = img.height();
  // Per-row prefix counts turn each disk row into an O(1) range query.
  std::vector<int> prefix(static_cast<std::size_t>(W + 1) * H);
  for (int y = 0; y < H; ++y) {
    int* p = &prefix[static_cast<std::size_t>(y) * (W + 1)];
    p[0] = 0;
    auto r = img.row(y);
    for (int x = 0; x < W; ++x) p[x + 1] = p[x] + (r[x] ? 1 : 0);
  }
  const auto hw = disk_half_widths(radius);
  BinaryImage out(W, H);
  for (int y = 0; y < H; ++y) {
    auto o = out.row(y);
    for (int dy = -radius; dy <= radius; ++dy) {
      const int sy = y + dy;
      if (sy < 0 || sy >= H) continue;
      const int* p = &prefix[static_cast<std::size_t>(sy) * (W + 1)];
      if (p[W] == 0) continue;
      const int w = hw[dy + radius];
      for (int x = 0; x < W; ++x) {
        if (o[x]) continue;
        const int lo = std::max(0, x - w);
        const int hi = std::min(W, x + w + 1);
        if (p[hi] - p[lo] > 0) o[x] = 1;
      }
    }
  }
  return out;
}

/// Sets every background pixel that is not 4-connected to the image border through background.
inline BinaryImage fill_holes(const BinaryImage& img) {
  const int W = img.width();
  const int H = img.height();
  std::vector<std::uint8_t> outside(img.size(), 0);
  std::vector<std::size_t> stack;
  auto seed = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * W + x;
    if (!img.pixels()[i] && !outside[i]) {
      outside[i] = 1;
      stack.push_back(i);
    }
  };
  for (int x = 0; x < W; ++x) {
    seed(x, 0);
    seed(x, H - 1);
  }
  for (int y = 0; y < H; ++y) {
    seed(0, y);
    seed(W - 1, y);
  }
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(p % W);
    const int y = static_cast<int>(p / W);
    if (x > 0) seed(x - 1, y);
    if (x + 1 < W) seed(x + 1, y);
    if (y > 0) seed(x, y - 1);
    if (y + 1 < H) seed(x, y + 1);
  }
  BinaryImage out(W, H);
  for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = outside[i] ? 0 : 1;
  return out;
}

}  // namespace gate
