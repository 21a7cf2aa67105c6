#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gate/core/error.hpp"
#include "gate/imgcore/image.hpp"

namespace gate::thermal {

inline constexpr int kLineSamples = 256;
inline constexpr float kMinTempC = 30.0f;
inline constexpr float kMaxTempC = 800.0f;

struct ThermalLine {
  std::array<float, kLineSamples> samples{};
  std::int64_t timestamp_us = 0;
};

/// Temperatures in °C; column i holds line i, so width is the line count and height is 256.
struct ThermalMosaic {
  FloatImage temps;
  std::int64_t start_time_us = 0;
  double line_period_us = 0;
  std::size_t clamped = 0;  ///< samples pulled back into [30, 800] while assembling

  int width() const { return temps.width(); }
  int height() const { return temps.height(); }
};

inline float clamp_temp(float t) { return std::clamp(t, kMinTempC, kMaxTempC); }

inline ThermalMosaic build_mosaic(std::span<const ThermalLine> lines) {
  if (lines.empty()) throw Error(Errc::invalid_argument, "build_mosaic: no thermal lines");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].timestamp_us < lines[i - 1].timestamp_us)
      throw Error(Errc::invalid_argument, "build_mosaic: timestamps must be non-decreasing");
  }
  ThermalMosaic m;
  const int w = static_cast<int>(lines.size());
  m.temps = FloatImage(w, kLineSamples);
  for (int x = 0; x < w; ++x) {
    const auto& line = lines[static_cast<std::size_t>(x)];
    for (int y = 0; y < kLineSamples; ++y) {
      const float v = line.samples[static_cast<std::size_t>(y)];
      const float c = clamp_temp(v);
      // NaN compares false both ways; treat it as out of range at the floor.
      const float out = v != v ? kMinTempC : c;
      if (out != v) ++m.clamped;
      m.temps(x, y) = out;
    }
  }
  m.start_time_us = lines.front().timestamp_us;
  if (w > 1) {
    m.line_period_us = static_cast<double>(lines.back().timestamp_us - lines.front().timestamp_us) / (w - 1);
  }
  return m;
}

}  // namespace gate::thermal
