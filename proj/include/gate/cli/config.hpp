#pragma once

// Tunables for every stage, loadable from a TOML-shaped key/value file:
//
//   [wagonid]     d = 512
//   [thermal]     threshold_c = 150
//   [pantograph]  ratio = 0.67
//   [synth]       distractors = 32
//                 hotspot_position = [0.3, 0.6]
//
// Parsing uses CLI11's TOML reader; unknown keys and bad values are validation errors.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "gate/pantograph/detect.hpp"
#include "gate/synth/scenario.hpp"
#include "gate/wagonid/params.hpp"

namespace gate::cli {

struct ThermalConfig {
  int block_w = 16;
  int block_h = 16;
  double threshold_c = 150;
  double tolerance_c = 5;
};

struct GateConfig {
  wagonid::SegmentationParams wagonid;
  ThermalConfig thermal;
  pantograph::PantographConfig pantograph;
  synth::ScenarioSpec scenario = default_scenario();

  /// Synthetic passage used when no config says otherwise: one 300 °C patch mid-wagon.
  static synth::ScenarioSpec default_scenario() {
    synth::ScenarioSpec s;
    s.hotspots.push_back({});
    return s;
  }

  void validate() const {
    wagonid.validate();
    if (thermal.block_w < 1 || thermal.block_h < 1) throw Error(Errc::invalid_argument, "thermal block size must be positive");
    if (thermal.tolerance_c < 0) throw Error(Errc::invalid_argument, "thermal tolerance must be >= 0");
    if (!(pantograph.ratio > 0 && pantograph.ratio <= 1)) throw Error(Errc::invalid_argument, "pantograph ratio must be in (0, 1]");
    if (pantograph.ransac.iters < 1 || !(pantograph.ransac.tol > 0)) throw Error(Errc::invalid_argument, "bad pantograph RANSAC settings");
    if (!(pantograph.window_factor >= 1) || !(pantograph.stride > 0 && pantograph.stride <= 1)) {
      throw Error(Errc::invalid_argument, "pantograph windows need window_factor >= 1 and stride in (0, 1]");
    }
    scenario.validate();
  }
};

namespace detail {

inline std::string single(const CLI::ConfigItem& it) {
  if (it.inputs.size() != 1) throw Error(Errc::invalid_argument, it.fullname() + " expects one value");
  return it.inputs[0];
}

template <typename T>
T parse_value(const std::string& key, const std::string& v) {
  if constexpr (std::is_same_v<T, bool>) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(Errc::invalid_argument, key + " must be true or false");
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else {
    T out{};
    if (!CLI::detail::lexical_cast(v, out)) throw Error(Errc::invalid_argument, key + ": cannot parse '" + v + "'");
    return out;
  }
}

template <typename T>
std::function<void(const CLI::ConfigItem&)> bind(T& field) {
  return [&field](const CLI::ConfigItem& it) { field = parse_value<T>(it.fullname(), single(it)); };
}

template <typename T>
std::vector<T> parse_list(const CLI::ConfigItem& it) {
  std::vector<T> out;
  for (const auto& v : it.inputs) {
    if (v.empty() || v == "[]") continue;
    out.push_back(parse_value<T>(it.fullname(), v));
  }
  return out;
}

}  // namespace detail

/// Applies key/value items to `cfg`. Keys are "<section>.<name>".
inline void apply_items(GateConfig& cfg, const std::vector<CLI::ConfigItem>& items) {
  using detail::bind;
  auto& w = cfg.wagonid;
  auto& t = cfg.thermal;
  auto& p = cfg.pantograph;
  auto& s = cfg.scenario;
  std::map<std::string, std::function<void(const CLI::ConfigItem&)>> table = {
      {"wagonid.r_D", bind(w.r_D)},
      {"wagonid.d", bind(w.d)},
      {"wagonid.s", bind(w.s)},
      {"wagonid.ransac_iters", bind(w.ransac_iters)},
      {"wagonid.ransac_inlier_tol", bind(w.ransac_inlier_tol)},
      {"wagonid.min_window_points", bind(w.min_window_points)},
      {"wagonid.top_k", bind(w.top_k)},
      {"wagonid.min_area", bind(w.min_area)},
      {"wagonid.max_height_frac", bind(w.max_height_frac)},
      {"wagonid.strip_cols", bind(w.strip_cols)},
      {"wagonid.min_char_boxes", bind(w.min_char_boxes)},
      {"thermal.block_w", bind(t.block_w)},
      {"thermal.block_h", bind(t.block_h)},
      {"thermal.threshold_c", bind(t.threshold_c)},
      {"thermal.tolerance_c", bind(t.tolerance_c)},
      {"pantograph.octaves", bind(p.sift.octaves)},
      {"pantograph.scales", bind(p.sift.scales)},
      {"pantograph.contrast", bind(p.sift.contrast)},
      {"pantograph.edge", bind(p.sift.edge)},
      {"pantograph.ratio", bind(p.ratio)},
      {"pantograph.ransac_iters", bind(p.ransac.iters)},
      {"pantograph.ransac_tol", bind(p.ransac.tol)},
      {"pantograph.min_inliers", bind(p.geom.min_inliers)},
      {"pantograph.min_area_ratio", bind(p.geom.min_area_ratio)},
      {"pantograph.max_area_ratio", bind(p.geom.max_area_ratio)},
      {"pantograph.margin", bind(p.geom.margin)},
      {"pantograph.exact_index", bind(p.exact_index)},
      {"pantograph.index_eps", bind(p.index_eps)},
      {"pantograph.window_factor", bind(p.window_factor)},
      {"pantograph.stride", bind(p.stride)},
      {"synth.wagon_id", bind(s.wagon_id)},
      {"synth.glyph_scale", bind(s.glyph_scale)},
      {"synth.side_width", bind(s.side_width)},
      {"synth.side_height", bind(s.side_height)},
      {"synth.distractors", bind(s.distractors)},
      {"synth.noise_sigma", bind(s.noise_sigma)},
      {"synth.speed_stretch", bind(s.speed_stretch)},
      {"synth.touching_pair", bind(s.touching_pair)},
      {"synth.roof_width", bind(s.roof_width)},
      {"synth.roof_height", bind(s.roof_height)},
      {"synth.roof_noise_sigma", bind(s.roof_noise_sigma)},
      {"synth.pantograph_present", bind(s.pantograph.present)},
      {"synth.pantograph_position", bind(s.pantograph.position)},
      {"synth.pantograph_gain", bind(s.pantograph.gain)},
      {"synth.pantograph_shear_deg", bind(s.pantograph.shear_deg)},
      {"synth.pantograph_perspective", bind(s.pantograph.perspective)},
      {"synth.pantograph_scale", bind(s.pantograph.scale)},
      {"synth.thermal_lines", bind(s.thermal_lines)},
      {"synth.thermal_ambient_c", bind(s.thermal_ambient_c)},
      {"synth.thermal_noise_c", bind(s.thermal_noise_c)},
      {"synth.thermal_right_present", bind(s.thermal_right_present)},
      {"synth.frontal_frames", bind(s.frontal_frames)},
      {"synth.passage_seconds", bind(s.passage_seconds)},
  };
  // Hotspots are given as parallel lists; missing lists keep the per-hotspot defaults.
  std::map<std::string, std::vector<double>> hot;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;  // section enter/leave markers
    const auto key = it.fullname();
    if (key.starts_with("synth.hotspot_")) {
      hot[key.substr(14)] = detail::parse_list<double>(it);
      continue;
    }
    const auto f = table.find(key);
    if (f == table.end()) throw Error(Errc::invalid_argument, "unknown config key '" + key + "'");
    f->second(it);
  }
  if (!hot.empty()) {
    std::size_t n = 0;
    for (const auto& [k, v] : hot) {
      if (k != "position" && k != "row" && k != "temp_c" && k != "lines" && k != "rows") {
        throw Error(Errc::invalid_argument, "unknown config key 'synth.hotspot_" + k + "'");
      }
      if (n && v.size() != n) throw Error(Errc::invalid_argument, "synth.hotspot_* lists differ in length");
      n = v.size();
    }
    s.hotspots.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      auto& h = s.hotspots[i];
      if (hot.count("position")) h.position = hot["position"][i];
      if (hot.count("row")) h.row = static_cast<int>(hot["row"][i]);
      if (hot.count("temp_c")) h.temp_c = hot["temp_c"][i];
      if (hot.count("lines")) h.lines = static_cast<int>(hot["lines"][i]);
      if (hot.count("rows")) h.rows = static_cast<int>(hot["rows"][i]);
    }
  }
}

inline GateConfig parse_config(std::istream& in) {
  GateConfig cfg;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(Errc::parse, std::string("config: ") + e.what());
  }
  apply_items(cfg, items);
  cfg.validate();
  return cfg;
}

inline GateConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot open config " + path.string());
  return parse_config(in);
}

}  // namespace gate::cli
