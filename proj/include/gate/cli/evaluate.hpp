#pragma once

// Scores processed sessions against their ground truth: character-level and full-ID
// accuracy / FN / FP rates for the identifier, pantograph detection counts, and exactness
// of thermal alarm blocks. Sessions and truths are paired by passage id.

#include <cstdio>
#include <set>

#include "gate/cli/raw.hpp"
#include "gate/session/store.hpp"
#include "gate/wagonid/evaluate.hpp"
#include "gate/wagonid/result_io.hpp"

namespace gate::cli {

inline constexpr const char* kEvaluationFormat = "gate.evaluation/1";

struct PantographCounts {
  int positives = 0;
  int negatives = 0;
  int detected = 0;         ///< positives found with IoU at or above the threshold
  int mislocated = 0;       ///< positives found below the IoU threshold
  int missed = 0;
  int false_detections = 0; ///< negatives reported as found
  double iou_sum = 0;
  friend bool operator==(const PantographCounts&, const PantographCounts&) = default;
};

struct EvaluationReport {
  int sessions = 0;
  wagonid::SegmentationMetrics wagon;
  PantographCounts pantograph;
  double iou_threshold = 0.8;
  int thermal_chains = 0;
  int thermal_exact = 0;  ///< chains whose alarm blocks equal the injected hot blocks
  std::map<std::string, int> cross_check;  ///< status -> count
  Json per_session = Json::array();
};

inline std::vector<std::pair<int, int>> alarm_blocks(const Json& chain) {
  std::vector<std::pair<int, int>> v;
  for (const auto& a : chain.at("alarms")) v.emplace_back(a.at("block").at(0).get<int>(), a.at("block").at(1).get<int>());
  std::sort(v.begin(), v.end());
  return v;
}

inline Json counts_json(const wagonid::Counts& c) {
  return {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}, {"accuracy", c.accuracy()}, {"fn_rate", c.fn_rate()}, {"fp_rate", c.fp_rate()}};
}

/// Adds one session/truth pair to the running report.
inline void score_session(EvaluationReport& r, const fs::path& session_dir, const session::SessionManifest& m, const Truth& t) {
  if (m.id != t.passage_id) throw Error(Errc::mismatched_input, "session " + m.id + " paired with truth for " + t.passage_id);
  auto doc = [&](const std::string& kind) {
    const auto it = m.detections.find(kind);
    if (it == m.detections.end()) throw Error(Errc::missing_artifact, "session " + m.id + " has no " + kind + " document");
    return read_json(session_dir / it->second);
  };
  ++r.sessions;
  Json row = {{"id", m.id}};

  const auto pred = wagonid::char_boxes_from_json(doc("wagon_id"));
  const auto wm = wagonid::score_image(pred, t.glyph_boxes);
  r.wagon.chars += wm.chars;
  r.wagon.full_id += wm.full_id;
  row["wagon_id"] = {{"tp", wm.chars.tp}, {"fn", wm.chars.fn}, {"fp", wm.chars.fp}, {"full_id", wm.full_id.tp == 1}};

  const auto pd = doc("pantograph");
  const bool found = pd.at("found").get<bool>();
  auto& pc = r.pantograph;
  Json prow = {{"present", t.pantograph_present}, {"found", found}};
  if (t.pantograph_present) {
    ++pc.positives;
    if (!found) {
      ++pc.missed;
    } else {
      const double v = iou(box_from_json(pd.at("p_bbox")), t.pantograph_box);
      pc.iou_sum += v;
      prow["iou"] = v;
      ++(v >= r.iou_threshold ? pc.detected : pc.mislocated);
    }
  } else {
    ++pc.negatives;
    if (found) ++pc.false_detections;
  }
  row["pantograph"] = prow;

  const auto td = doc("thermal");
  Json trow = Json::object();
  for (const auto& chain : td.at("chains")) {
    const std::string side = chain.at("side");
    const auto& expect = side == "left" ? t.hot_left : t.hot_right;
    const bool exact = alarm_blocks(chain) == expect;
    ++r.thermal_chains;
    r.thermal_exact += exact;
    trow[side] = exact;
  }
  const std::string cc = td.at("cross_check").at("status");
  ++r.cross_check[cc];
  trow["cross_check"] = cc;
  row["thermal"] = trow;
  r.per_session.push_back(row);
}

/// Evaluates every raw passage in `raw_dirs` against the session with the same id in `root`.
inline EvaluationReport evaluate_sessions(const fs::path& root, const std::vector<fs::path>& raw_dirs, double iou_threshold = 0.8) {
  EvaluationReport r;
  r.iou_threshold = iou_threshold;
  std::set<std::string> seen;
  for (const auto& raw : raw_dirs) {
    const auto t = read_truth(raw);
    if (!seen.insert(t.passage_id).second) throw Error(Errc::mismatched_input, "passage " + t.passage_id + " listed twice");
    session::SessionManifest m;
    try {
      m = session::load_session(root, t.passage_id);
    } catch (const Error& e) {
      if (e.code() == Errc::not_found) throw Error(Errc::mismatched_input, "no session for passage " + t.passage_id);
      throw;
    }
    score_session(r, root / m.id, m, t);
  }
  return r;
}

inline Json to_json(const EvaluationReport& r) {
  const auto& p = r.pantograph;
  const int found_pos = p.detected + p.mislocated;
  Json cc = Json::object();
  for (const auto& [k, v] : r.cross_check) cc[k] = v;
  return {{"format", kEvaluationFormat},
          {"sessions", r.sessions},
          {"wagon_id", {{"characters", counts_json(r.wagon.chars)}, {"full_id", counts_json(r.wagon.full_id)}}},
          {"pantograph", {{"positives", p.positives}, {"negatives", p.negatives}, {"detected", p.detected},
                          {"mislocated", p.mislocated}, {"missed", p.missed}, {"false_detections", p.false_detections},
                          {"iou_threshold", r.iou_threshold},
                          {"mean_iou", found_pos ? p.iou_sum / found_pos : 0.0}}},
          {"thermal", {{"chains", r.thermal_chains}, {"exact_alarm_blocks", r.thermal_exact}, {"cross_check", cc}}},
          {"per_session", r.per_session}};
}

/// Plain-text tables: identifier rates in Accuracy | FN Rate | FP Rate columns, then the
/// pantograph and thermal counts.
inline std::string format_report(const EvaluationReport& r) {
  std::string out;
  char line[160];
  auto row = [&](const char* name, const wagonid::Counts& c) {
    std::snprintf(line, sizeof line, "%-12s | %8.1f | %7.1f | %7.1f\n", name, c.accuracy(), c.fn_rate(), c.fp_rate());
    out += line;
  };
  std::snprintf(line, sizeof line, "Sessions: %d\n\n", r.sessions);
  out += line;
  out += "Wagon ID     | Accuracy | FN Rate | FP Rate\n";
  out += "-------------+----------+---------+--------\n";
  row("Characters", r.wagon.chars);
  row("Full ID", r.wagon.full_id);
  const auto& p = r.pantograph;
  std::snprintf(line, sizeof line,
                "\nPantograph: %d/%d positives detected (IoU >= %.2f), %d mislocated, %d missed; "
                "%d/%d negatives falsely detected\n",
                p.detected, p.positives, r.iou_threshold, p.mislocated, p.missed, p.false_detections, p.negatives);
  out += line;
  std::snprintf(line, sizeof line, "Thermal: %d/%d chains with exact alarm blocks", r.thermal_exact, r.thermal_chains);
  out += line;
  for (const auto& [k, v] : r.cross_check) out += "; cross-check " + k + ": " + std::to_string(v);
  out += "\n";
  return out;
}

}  // namespace gate::cli
