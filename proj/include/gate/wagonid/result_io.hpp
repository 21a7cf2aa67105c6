#pragma once

// Result document of the identifier segmentation:
//
//   {
//     "format": "gate.wagon-id/1",
//     "status": "ok" | "no_candidates" | "low_confidence",
//     "otsu_threshold": int,
//     "id_box": [x, y, w, h],
//     "char_boxes": [[x, y, w, h], ...],            // left to right
//     "votes": [{"component": i, "box": [...], "votes": n, "weighted": v}, ...],
//     "fitted_line": {"slope": a, "intercept": b},  // y = a*x + b, image coordinates
//     "timing_ms": t                                 // only when requested
//   }
//
// "votes" lists every component with a nonzero raw vote, in component order.

#include <optional>

#include "gate/core/json.hpp"
#include "gate/wagonid/segment.hpp"

namespace gate::wagonid {

inline constexpr const char* kResultFormat = "gate.wagon-id/1";

inline Json to_json(const IdSegmentation& seg, const LabeledComponents* cc = nullptr, bool include_timing = false) {
  Json doc;
  doc["format"] = kResultFormat;
  doc["status"] = "ok";
  doc["otsu_threshold"] = seg.otsu_threshold;
  doc["id_box"] = box_json(seg.id_box);
  Json boxes = Json::array();
  for (const auto& b : seg.char_boxes) boxes.push_back(box_json(b));
  doc["char_boxes"] = boxes;
  Json votes = Json::array();
  for (std::size_t i = 0; i < seg.votes.votes.size(); ++i) {
    if (!seg.votes.votes[i]) continue;
    Json v;
    v["component"] = i;
    if (cc) v["box"] = box_json(cc->boxes[i]);
    v["votes"] = seg.votes.votes[i];
    v["weighted"] = i < seg.votes.weighted.size() ? seg.votes.weighted[i] : 0.0;
    votes.push_back(v);
  }
  doc["votes"] = votes;
  doc["fitted_line"] = {{"slope", seg.fitted_line.slope}, {"intercept", seg.fitted_line.intercept}};
  if (include_timing) doc["timing_ms"] = seg.elapsed_ms;
  return doc;
}

/// Document for a run that ended without a usable segmentation.
inline Json failure_json(Errc code, const std::string& message) {
  Json doc;
  doc["format"] = kResultFormat;
  doc["status"] = std::string(to_string(code));
  doc["message"] = message;
  doc["char_boxes"] = Json::array();
  return doc;
}

/// Predicted character boxes from a result document (empty for failed runs).
inline std::vector<BBox> char_boxes_from_json(const Json& doc) {
  if (doc.value("format", "") != kResultFormat) throw Error(Errc::parse, "not a wagon-id result document");
  std::vector<BBox> out;
  for (const auto& b : doc.at("char_boxes")) out.push_back(box_from_json(b));
  return out;
}

}  // namespace gate::wagonid
