#pragma once

// Raw passage directory, as produced by `gate synth` and consumed by `gate run`:
//
//   passage.json         passage id, recording time, per-stream start time and rate
//   scenario.json        the generating scenario (informational)
//   truth.json           ground truth: glyph boxes, hot blocks, pantograph placement
//   side-low.pgm         line-scan side mosaic (identifier)
//   side-high.pgm        line-scan roof mosaic (pantograph)
//   thermal-left.tlines  timestamped thermal lines; thermal-right.tlines may be absent
//   frontal/NNNNNN.pgm   matrix-camera frames

#include <filesystem>
#include <random>

#include "gate/acquisition/sensor.hpp"
#include "gate/core/json.hpp"
#include "gate/imgcore/pnm.hpp"
#include "gate/session/store.hpp"
#include "gate/synth/frontal.hpp"
#include "gate/synth/pantograph_scene.hpp"
#include "gate/synth/thermal_lines.hpp"
#include "gate/synth/train_side.hpp"
#include "gate/thermal/io.hpp"

namespace gate::cli {

namespace fs = std::filesystem;

inline constexpr const char* kPassageFormat = "gate.passage/1";
inline constexpr const char* kTruthFormat = "gate.truth/1";
/// Recording times of synthetic passages count from this instant (2024-01-01T00:00:00Z).
inline constexpr std::int64_t kSynthEpochUs = 1'704'067'200'000'000;

struct PassageInfo {
  std::string id;
  std::int64_t recorded_us = 0;
  std::map<std::string, session::StreamClock> clocks;
};

struct Truth {
  std::string passage_id;
  std::string wagon_id;
  std::vector<BBox> glyph_boxes;
  BBox id_box;
  std::vector<std::pair<int, int>> hot_left;
  std::vector<std::pair<int, int>> hot_right;
  bool pantograph_present = false;
  BBox pantograph_box;
};

inline std::string passage_id(std::uint64_t seed) { return "passage-" + std::to_string(seed); }

inline Json to_json(const PassageInfo& p) {
  Json streams = Json::object();
  for (const auto& [role, c] : p.clocks) streams[role] = {{"start_time_us", c.start_time_us}, {"rate_hz", c.rate_hz}};
  return {{"format", kPassageFormat}, {"id", p.id}, {"recorded_us", p.recorded_us}, {"streams", streams}};
}

inline PassageInfo passage_from_json(const Json& j) {
  if (j.value("format", "") != kPassageFormat) throw Error(Errc::parse, "not a passage document");
  PassageInfo p;
  p.id = j.at("id").get<std::string>();
  p.recorded_us = j.at("recorded_us").get<std::int64_t>();
  for (const auto& [role, c] : j.at("streams").items()) {
    p.clocks[role] = {c.at("start_time_us").get<std::int64_t>(), c.at("rate_hz").get<std::uint32_t>()};
  }
  return p;
}

inline Json blocks_json(const std::vector<std::pair<int, int>>& v) {
  Json a = Json::array();
  for (auto [x, y] : v) a.push_back({x, y});
  return a;
}

inline std::vector<std::pair<int, int>> blocks_from_json(const Json& a) {
  std::vector<std::pair<int, int>> v;
  for (const auto& b : a) v.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
  return v;
}

inline Json to_json(const Truth& t) {
  Json glyphs = Json::array();
  for (const auto& b : t.glyph_boxes) glyphs.push_back(box_json(b));
  return {{"format", kTruthFormat},
          {"passage_id", t.passage_id},
          {"wagon_id", t.wagon_id},
          {"glyph_boxes", glyphs},
          {"id_box", box_json(t.id_box)},
          {"hot_blocks", {{"left", blocks_json(t.hot_left)}, {"right", blocks_json(t.hot_right)}}},
          {"pantograph", {{"present", t.pantograph_present},
                          {"box", t.pantograph_present ? box_json(t.pantograph_box) : Json(nullptr)}}}};
}

inline Truth truth_from_json(const Json& j) {
  if (j.value("format", "") != kTruthFormat) throw Error(Errc::parse, "not a ground-truth document");
  try {
    Truth t;
    t.passage_id = j.at("passage_id").get<std::string>();
    t.wagon_id = j.at("wagon_id").get<std::string>();
    for (const auto& b : j.at("glyph_boxes")) t.glyph_boxes.push_back(box_from_json(b));
    t.id_box = box_from_json(j.at("id_box"));
    t.hot_left = blocks_from_json(j.at("hot_blocks").at("left"));
    t.hot_right = blocks_from_json(j.at("hot_blocks").at("right"));
    t.pantograph_present = j.at("pantograph").at("present").get<bool>();
    if (t.pantograph_present) t.pantograph_box = box_from_json(j.at("pantograph").at("box"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("malformed ground truth: ") + e.what());
  }
}

inline Json scenario_json(const synth::ScenarioSpec& s) {
  Json hot = Json::array();
  for (const auto& h : s.hotspots) {
    hot.push_back({{"position", h.position}, {"row", h.row}, {"temp_c", h.temp_c}, {"lines", h.lines}, {"rows", h.rows},
                   {"left", h.left}, {"right", h.right}});
  }
  const auto& p = s.pantograph;
  return {{"seed", s.seed},
          {"wagon_id", s.resolved_wagon_id()},
          {"side", {{"width", s.side_width}, {"height", s.side_height}, {"glyph_scale", s.glyph_scale},
                    {"distractors", s.distractors}, {"noise_sigma", s.noise_sigma}, {"speed_stretch", s.speed_stretch},
                    {"touching_pair", s.touching_pair}}},
          {"roof", {{"width", s.roof_width}, {"height", s.roof_height}, {"noise_sigma", s.roof_noise_sigma}}},
          {"pantograph", {{"present", p.present}, {"position", p.position}, {"gain", p.gain}, {"shear_deg", p.shear_deg},
                          {"perspective", p.perspective}, {"scale", p.scale}}},
          {"thermal", {{"lines", s.thermal_lines}, {"ambient_c", s.thermal_ambient_c}, {"noise_c", s.thermal_noise_c},
                       {"right_present", s.thermal_right_present}, {"hotspots", hot}}},
          {"frontal_frames", s.frontal_frames},
          {"passage_seconds", s.passage_seconds}};
}

/// Coarse per-stream start offsets: each sensor starts within a few milliseconds of the
/// recording instant, as with independently triggered cameras.
inline PassageInfo synth_passage(const synth::ScenarioSpec& s) {
  PassageInfo p;
  p.id = passage_id(s.seed);
  p.recorded_us = kSynthEpochUs + static_cast<std::int64_t>(s.seed % 1'000'000) * 60'000'000;
  std::mt19937_64 rng(s.seed ^ 0x7a3cULL);
  std::uniform_int_distribution<std::int64_t> jitter(0, 5'000);
  auto rate = [](acquisition::SensorKind k) {
    switch (k) {
      case acquisition::SensorKind::matrix_visual: return acquisition::matrix_camera("m").rate_hz;
      case acquisition::SensorKind::line_visual: return acquisition::line_camera("l").rate_hz;
      case acquisition::SensorKind::line_thermal: return acquisition::thermal_camera("t").rate_hz;
    }
    return std::uint32_t{1};
  };
  using K = acquisition::SensorKind;
  for (auto [role, kind] : {std::pair{"frontal", K::matrix_visual}, {"side-low", K::line_visual}, {"side-high", K::line_visual},
                            {"thermal-left", K::line_thermal}, {"thermal-right", K::line_thermal}}) {
    p.clocks[role] = {p.recorded_us + jitter(rng), rate(kind)};
  }
  return p;
}

/// Renders a full passage into `dir` and returns its ground truth. Deterministic per spec.
inline Truth write_raw(const synth::ScenarioSpec& spec, const fs::path& dir) {
  spec.validate();
  fs::create_directories(dir / "frontal");
  const auto info = synth_passage(spec);
  Truth t;
  t.passage_id = info.id;

  const auto side = synth::render_side_mosaic(spec);
  pnm::write_pgm(dir / "side-low.pgm", side.image);
  t.wagon_id = side.wagon_id;
  t.glyph_boxes = side.glyph_boxes;
  t.id_box = side.id_box;

  const auto roof = synth::render_roof_scene(spec);
  pnm::write_pgm(dir / "side-high.pgm", roof.image);
  t.pantograph_present = roof.present;
  t.pantograph_box = roof.truth;

  const double thermal_rate = info.clocks.at("thermal-left").rate_hz;
  thermal::write_tlines(dir / "thermal-left.tlines", synth::render_thermal_lines(spec, true, thermal_rate));
  t.hot_left = synth::hot_blocks(spec, true);
  if (spec.thermal_right_present) {
    thermal::write_tlines(dir / "thermal-right.tlines", synth::render_thermal_lines(spec, false, thermal_rate));
    t.hot_right = synth::hot_blocks(spec, false);
  }

  for (int i = 0; i < spec.frontal_frames; ++i) {
    pnm::write_pgm(dir / "frontal" / session::frame_name(static_cast<std::size_t>(i)),
                   synth::render_frontal_frame(spec, i, spec.frontal_frames));
  }
  write_json(dir / "passage.json", to_json(info));
  write_json(dir / "scenario.json", scenario_json(spec));
  write_json(dir / "truth.json", to_json(t));
  return t;
}

inline PassageInfo read_passage(const fs::path& dir) { return passage_from_json(read_json(dir / "passage.json")); }
inline Truth read_truth(const fs::path& dir) { return truth_from_json(read_json(dir / "truth.json")); }

}  // namespace gate::cli
