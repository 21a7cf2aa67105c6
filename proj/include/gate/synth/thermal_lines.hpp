#pragma once

// Thermal line scans of one passage for either side of the train: ambient wagon body,
// warm axle boxes near the bottom rows, the scenario's hot patches, and uniform sensor noise.

#include <cmath>
#include <random>
#include <vector>

#include "gate/synth/scenario.hpp"
#include "gate/thermal/mosaic.hpp"

namespace gate::synth {

struct ThermalTruth {
  BBox region;  ///< hot patch in mosaic pixels (x = line, y = row)
  double temp_c = 0;
};

inline BBox hotspot_region(const ScenarioSpec& spec, const HotspotSpec& h) {
  const int x0 = std::min(static_cast<int>(std::floor(h.position * spec.thermal_lines)), spec.thermal_lines - 1);
  return intersect({x0, h.row, h.lines, h.rows}, {0, 0, spec.thermal_lines, thermal::kLineSamples});
}

/// Line timestamps for a sensor sampling at `rate_hz`, in integer microseconds.
inline std::int64_t line_timestamp_us(std::int64_t i, double rate_hz) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(i) * 1e6 / rate_hz));
}

inline std::vector<thermal::ThermalLine> render_thermal_lines(const ScenarioSpec& spec, bool left_side,
                                                              double rate_hz = 512.0) {
  spec.validate();
  std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ULL + (left_side ? 0x1eULL : 0x21ULL));
  std::uniform_real_distribution<double> noise(-spec.thermal_noise_c, spec.thermal_noise_c);

  const int n = spec.thermal_lines;
  std::vector<thermal::ThermalLine> lines(static_cast<std::size_t>(n));
  std::vector<BBox> hot;
  std::vector<double> hot_t;
  for (const auto& h : spec.hotspots) {
    if (left_side ? h.left : h.right) {
      hot.push_back(hotspot_region(spec, h));
      hot_t.push_back(h.temp_c);
    }
  }
  // Axle boxes: four per wagon, a few degrees above ambient.
  const double axle_c = spec.thermal_ambient_c + 15;
  const int axle_w = std::max(4, n / 64);
  const double axle_pos[] = {0.12, 0.22, 0.78, 0.88};

  for (int x = 0; x < n; ++x) {
    auto& line = lines[static_cast<std::size_t>(x)];
    line.timestamp_us = line_timestamp_us(x, rate_hz);
    bool axle = false;
    for (double p : axle_pos) axle |= std::abs(x - static_cast<int>(p * n)) < axle_w / 2;
    for (int y = 0; y < thermal::kLineSamples; ++y) {
      double t = spec.thermal_ambient_c;
      if (y >= 200) t = spec.thermal_ambient_c - 3;  // undercarriage in shade
      if (axle && y >= 210 && y < 236) t = axle_c;
      for (std::size_t k = 0; k < hot.size(); ++k)
        if (hot[k].contains_point(x, y)) t = std::max(t, hot_t[k]);
      line.samples[static_cast<std::size_t>(y)] = static_cast<float>(t + noise(rng));
    }
  }
  return lines;
}

/// Blocks that overlap a hot patch visible from the given side.
inline std::vector<std::pair<int, int>> hot_blocks(const ScenarioSpec& spec, bool left_side, int block_w = 16,
                                                   int block_h = 16) {
  std::vector<std::pair<int, int>> out;
  for (const auto& h : spec.hotspots) {
    if (!(left_side ? h.left : h.right)) continue;
    const BBox r = hotspot_region(spec, h);
    for (int by = r.y / block_h; by <= (r.bottom() - 1) / block_h; ++by)
      for (int bx = r.x / block_w; bx <= (r.right() - 1) / block_w; ++bx) out.emplace_back(bx, by);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace gate::synth
