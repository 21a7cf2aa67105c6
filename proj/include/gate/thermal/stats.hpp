#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gate/thermal/mosaic.hpp"

namespace gate::thermal {

struct BlockCell {
  double mean = 0;
  float max = 0;
  int count = 0;
};

struct BlockStats {
  int block_w = 16;
  int block_h = 16;
  int cols = 0;  ///< blocks across
  int rows = 0;  ///< blocks down
  std::vector<BlockCell> cells;  ///< row-major, rows × cols
  float global_min = 0;
  float global_max = 0;

  const BlockCell& at(int bx, int by) const { return cells[static_cast<std::size_t>(by) * cols + bx]; }
  BBox block_box(int bx, int by, int width, int height) const {
    const int x = bx * block_w, y = by * block_h;
    return {x, y, std::min(block_w, width - x), std::min(block_h, height - y)};
  }
};

inline BlockStats block_stats(const ThermalMosaic& m, int block_w = 16, int block_h = 16) {
  if (block_w < 1 || block_h < 1) throw Error(Errc::invalid_argument, "block dimensions must be >= 1");
  BlockStats s;
  s.block_w = block_w;
  s.block_h = block_h;
  s.cols = (m.width() + block_w - 1) / block_w;
  s.rows = (m.height() + block_h - 1) / block_h;
  s.cells.assign(static_cast<std::size_t>(s.cols) * s.rows, {});
  std::vector<double> sums(s.cells.size(), 0.0);
  for (auto& c : s.cells) c.max = -std::numeric_limits<float>::infinity();
  s.global_min = std::numeric_limits<float>::infinity();
  s.global_max = -std::numeric_limits<float>::infinity();
  for (int y = 0; y < m.height(); ++y) {
    const auto row = m.temps.row(y);
    const std::size_t base = static_cast<std::size_t>(y / block_h) * s.cols;
    for (int x = 0; x < m.width(); ++x) {
      const float v = row[static_cast<std::size_t>(x)];
      const std::size_t i = base + static_cast<std::size_t>(x / block_w);
      sums[i] += v;
      s.cells[i].max = std::max(s.cells[i].max, v);
      ++s.cells[i].count;
      s.global_min = std::min(s.global_min, v);
      s.global_max = std::max(s.global_max, v);
    }
  }
  for (std::size_t i = 0; i < s.cells.size(); ++i) s.cells[i].mean = sums[i] / s.cells[i].count;
  return s;
}

struct AlarmBlock {
  int bx = 0;
  int by = 0;
  float max_c = 0;
  double mean_c = 0;
  double threshold_c = 0;
};

/// Blocks whose maximum reaches the threshold, hottest first (ties in raster order).
inline std::vector<AlarmBlock> detect_alarms(const BlockStats& s, double threshold_c = 150.0) {
  std::vector<AlarmBlock> out;
  for (int by = 0; by < s.rows; ++by)
    for (int bx = 0; bx < s.cols; ++bx) {
      const auto& c = s.at(bx, by);
      if (c.max >= threshold_c) out.push_back({bx, by, c.max, c.mean, threshold_c});
    }
  std::stable_sort(out.begin(), out.end(), [](const AlarmBlock& a, const AlarmBlock& b) { return a.max_c > b.max_c; });
  return out;
}

enum class CrossStatus { pass, fail, unavailable };

inline const char* to_string(CrossStatus s) {
  switch (s) {
    case CrossStatus::pass: return "pass";
    case CrossStatus::fail: return "fail";
    case CrossStatus::unavailable: return "unavailable";
  }
  return "unknown";
}

struct CrossCheck {
  CrossStatus status = CrossStatus::unavailable;
  double tolerance_c = 5.0;
  double min_delta_c = 0;  ///< |min_a - min_b|
  double max_delta_c = 0;  ///< |max_a - max_b|

  bool passed() const { return status == CrossStatus::pass; }
  friend bool operator==(const CrossCheck&, const CrossCheck&) = default;
};

/// Compares the global extrema of the two chains; per-block comparison is meaningless
/// because the cameras look at opposite sides of the train.
inline CrossCheck cross_validate(const BlockStats& a, const BlockStats& b, double tol_c = 5.0) {
  CrossCheck r;
  r.tolerance_c = tol_c;
  r.min_delta_c = std::fabs(static_cast<double>(a.global_min) - b.global_min);
  r.max_delta_c = std::fabs(static_cast<double>(a.global_max) - b.global_max);
  r.status = r.min_delta_c <= tol_c && r.max_delta_c <= tol_c ? CrossStatus::pass : CrossStatus::fail;
  return r;
}

inline CrossCheck cross_unavailable(double tol_c = 5.0) {
  CrossCheck r;
  r.tolerance_c = tol_c;
  return r;
}

}  // namespace gate::thermal
