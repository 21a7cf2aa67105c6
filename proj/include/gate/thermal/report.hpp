#pragma once

#include <optional>

#include "gate/core/json.hpp"
#include "gate/thermal/stats.hpp"

namespace gate::thermal {

inline constexpr const char* kReportFormat = "gate.thermal-report/1";

struct ChainSummary {
  std::string side;  ///< "left" or "right"
  int width = 0;
  int height = 0;
  std::size_t clamped = 0;
  float global_min = 0;
  float global_max = 0;
  std::vector<AlarmBlock> alarms;
};

struct ThermalReport {
  int block_w = 16;
  int block_h = 16;
  double threshold_c = 150;
  std::vector<ChainSummary> chains;
  CrossCheck cross_check;
};

inline ChainSummary summarize_chain(std::string side, const ThermalMosaic& m, const BlockStats& s, double threshold_c) {
  return {std::move(side), m.width(), m.height(), m.clamped, s.global_min, s.global_max, detect_alarms(s, threshold_c)};
}

/// Runs both chains end to end. A missing right chain leaves the cross-check unavailable.
inline ThermalReport analyze_passage(const ThermalMosaic& left, const ThermalMosaic* right, int block_w = 16,
                                     int block_h = 16, double threshold_c = 150, double tol_c = 5) {
  ThermalReport r;
  r.block_w = block_w;
  r.block_h = block_h;
  r.threshold_c = threshold_c;
  const auto sl = block_stats(left, block_w, block_h);
  r.chains.push_back(summarize_chain("left", left, sl, threshold_c));
  if (right) {
    const auto sr = block_stats(*right, block_w, block_h);
    r.chains.push_back(summarize_chain("right", *right, sr, threshold_c));
    r.cross_check = cross_validate(sl, sr, tol_c);
  } else {
    r.cross_check = cross_unavailable(tol_c);
  }
  return r;
}

inline Json to_json(const ThermalReport& r, int mosaic_height = kLineSamples) {
  Json j;
  j["format"] = kReportFormat;
  j["block"] = {{"w", r.block_w}, {"h", r.block_h}};
  j["threshold_c"] = r.threshold_c;
  Json chains = Json::array();
  for (const auto& c : r.chains) {
    Json alarms = Json::array();
    BlockStats geom;
    geom.block_w = r.block_w;
    geom.block_h = r.block_h;
    for (const auto& a : c.alarms) {
      alarms.push_back({{"block", {a.bx, a.by}},
                        {"box", box_json(geom.block_box(a.bx, a.by, c.width, mosaic_height))},
                        {"max_c", a.max_c},
                        {"mean_c", a.mean_c},
                        {"threshold_c", a.threshold_c}});
    }
    chains.push_back({{"side", c.side},
                      {"width", c.width},
                      {"height", c.height},
                      {"clamped_samples", c.clamped},
                      {"global_min_c", c.global_min},
                      {"global_max_c", c.global_max},
                      {"alarms", std::move(alarms)}});
  }
  j["chains"] = std::move(chains);
  Json cc = {{"status", to_string(r.cross_check.status)}, {"tolerance_c", r.cross_check.tolerance_c}};
  if (r.cross_check.status != CrossStatus::unavailable) {
    cc["min_delta_c"] = r.cross_check.min_delta_c;
    cc["max_delta_c"] = r.cross_check.max_delta_c;
  }
  j["cross_check"] = std::move(cc);
  return j;
}

}  // namespace gate::thermal
