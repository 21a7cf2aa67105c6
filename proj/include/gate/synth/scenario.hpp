#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gate/core/error.hpp"

namespace gate::synth {

struct HotspotSpec {
  double position = 0.5;  ///< fraction along the passage where the hot patch starts
  int row = 128;          ///< top row on the 256-row thermal line
  double temp_c = 300;
  int lines = 8;          ///< extent along the passage, in thermal lines
  int rows = 8;
  bool left = true;
  bool right = true;
};

struct PantographSpec {
  bool present = true;
  double position = 0.5;  ///< fraction of the roof mosaic width
  double gain = 1.0;      ///< illumination gain applied to the composited template
  double shear_deg = 0;   ///< horizontal shear of the projective warp
  double perspective = 0; ///< small projective term (per-pixel), 0 = affine
  double scale = 1.0;
};

/// Description of one synthetic train passage (one wagon).
struct ScenarioSpec {
  std::uint64_t seed = 1;
  std::string wagon_id;  ///< 12 digits; empty = drawn from the seed
  int glyph_scale = 6;
  int side_height = 1024;
  int side_width = 8192;
  int distractors = 32;
  double noise_sigma = 8;
  /// Horizontal stretch of the side mosaic caused by train speed (1 = nominal).
  double speed_stretch = 1.0;
  /// Index of a glyph that touches its right neighbour (merge fixture); -1 = none.
  int touching_pair = -1;

  int roof_height = 320;
  int roof_width = 1280;
  double roof_noise_sigma = 5;
  PantographSpec pantograph;

  int thermal_lines = 2048;
  double thermal_ambient_c = 40;
  double thermal_noise_c = 1.0;
  std::vector<HotspotSpec> hotspots;
  bool thermal_right_present = true;

  int frontal_frames = 12;
  double passage_seconds = 4.0;

  void validate() const {
    if (!wagon_id.empty()) {
      if (wagon_id.size() != 12) throw Error(Errc::invalid_argument, "wagon_id must have 12 characters");
      for (char c : wagon_id)
        if (c < '0' || c > '9') throw Error(Errc::invalid_argument, "wagon_id must be numeric");
    }
    for (const auto& h : hotspots) {
      if (h.temp_c < 30 || h.temp_c > 800) throw Error(Errc::invalid_argument, "hotspot temperature outside [30, 800]");
      if (h.position < 0 || h.position > 1 || h.lines < 1 || h.rows < 1 || h.row < 0 || h.row + h.rows > 256)
        throw Error(Errc::invalid_argument, "hotspot placement outside the thermal mosaic");
    }
    if (side_width < 1024 || side_height < 256) throw Error(Errc::invalid_argument, "side mosaic too small");
    if (thermal_lines < 1) throw Error(Errc::invalid_argument, "thermal_lines must be positive");
    if (passage_seconds <= 0) throw Error(Errc::invalid_argument, "passage_seconds must be positive");
    if (glyph_scale < 2) throw Error(Errc::invalid_argument, "glyph_scale must be >= 2");
    if (touching_pair >= 11) throw Error(Errc::invalid_argument, "touching_pair must be < 11");
  }

  std::string resolved_wagon_id() const {
    if (!wagon_id.empty()) return wagon_id;
    std::mt19937_64 rng(seed ^ 0x5151'1d1dULL);
    std::string id;
    for (int i = 0; i < 12; ++i) id.push_back(static_cast<char>('0' + rng() % 10));
    return id;
  }
};

}  // namespace gate::synth
