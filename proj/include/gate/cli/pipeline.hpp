#pragma once

// Raw passage -> session bundle: wagon-ID segmentation on the low side mosaic, both thermal
// chains with cross-validation, pantograph detection on the roof mosaic, tile pyramids and
// the manifest. The three detection stages are independent and run concurrently; each is
// deterministic, so the bundle is byte-stable for a given raw directory and seed.

#include <future>
#include <optional>

#include "gate/cli/config.hpp"
#include "gate/cli/raw.hpp"
#include "gate/pantograph.hpp"
#include "gate/session/store.hpp"
#include "gate/thermal.hpp"
#include "gate/wagonid/result_io.hpp"

namespace gate::cli {

/// A stage that could not produce its result. The CLI maps it to exit code 3.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(std::string stage, const std::string& what)
      : std::runtime_error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

template <typename F>
auto run_stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(name, e.what());
  }
}

struct RunOptions {
  GateConfig config;
  std::uint64_t seed = 1;
  std::optional<std::string> session_id;          ///< defaults to the passage id
  std::optional<fs::path> model_path;              ///< PGFM1 model set; default: built-in template
};

/// Wagon-ID result document; a segmentation that finds no plausible identifier is a
/// result ("status" names why), not a stage failure.
inline Json wagon_id_document(const GrayImage& side, const wagonid::SegmentationParams& p, std::uint64_t seed) {
  try {
    const auto seg = wagonid::segment_wagon_id(side, p, seed);
    return wagonid::to_json(seg);
  } catch (const Error& e) {
    if (e.code() == Errc::no_candidates || e.code() == Errc::low_confidence) return wagonid::failure_json(e.code(), e.what());
    throw;
  }
}

inline thermal::ThermalMosaic load_chain(const fs::path& p) { return thermal::build_mosaic(thermal::read_tlines(p)); }

inline std::vector<pantograph::FeatureModel> pantograph_model(const RunOptions& o) {
  if (o.model_path) return pantograph::read_models(*o.model_path);
  return pantograph::build_model_set(synth::pantograph_template(), o.config.pantograph.sift);
}

inline session::SessionManifest run_pipeline(const fs::path& raw, const fs::path& out_root, const RunOptions& o) {
  const auto& cfg = o.config;
  const auto info = run_stage("load", [&] {
    cfg.validate();
    return read_passage(raw);
  });

  session::SessionBundle b;
  b.id = o.session_id.value_or(info.id);
  b.created_us = info.recorded_us;
  b.clocks = info.clocks;

  auto wagon = std::async(std::launch::async, [&] {
    return run_stage("wagon-id", [&] {
      auto side = pnm::read_pgm(raw / "side-low.pgm");
      auto doc = wagon_id_document(side, cfg.wagonid, o.seed);
      return std::pair{std::move(side), std::move(doc)};
    });
  });
  auto therm = std::async(std::launch::async, [&] {
    return run_stage("thermal", [&] {
      const auto left = load_chain(raw / "thermal-left.tlines");
      std::optional<thermal::ThermalMosaic> right;
      if (fs::exists(raw / "thermal-right.tlines")) right = load_chain(raw / "thermal-right.tlines");
      const auto& t = cfg.thermal;
      const auto report = thermal::analyze_passage(left, right ? &*right : nullptr, t.block_w, t.block_h, t.threshold_c,
                                                   t.tolerance_c);
      return std::tuple{left.temps, right ? std::optional(right->temps) : std::nullopt, thermal::to_json(report)};
    });
  });
  auto panto = std::async(std::launch::async, [&] {
    return run_stage("pantograph", [&] {
      auto roof = pnm::read_pgm(raw / "side-high.pgm");
      const auto model = pantograph_model(o);
      auto det = pantograph::detect_pantograph(roof, model, cfg.pantograph, o.seed);
      return std::pair{std::move(roof), pantograph::to_json(det)};
    });
  });

  run_stage("frontal", [&] {
    for (std::size_t i = 0;; ++i) {
      const auto p = raw / "frontal" / session::frame_name(i);
      if (!fs::exists(p)) break;
      b.frontal.push_back(pnm::read_pgm(p));
    }
  });

  // Collect in a fixed order; get() rethrows the stage's own failure.
  auto [side, wdoc] = wagon.get();
  auto [tl, tr, tdoc] = therm.get();
  auto [roof, pdoc] = panto.get();
  b.side_low = std::move(side);
  b.side_high = std::move(roof);
  b.thermal_left = std::move(tl);
  b.thermal_right = std::move(tr);
  b.detections["wagon_id"] = std::move(wdoc);
  b.detections["thermal"] = std::move(tdoc);
  b.detections["pantograph"] = std::move(pdoc);

  return run_stage("session", [&] {
    // Roles absent from the raw passage carry no clock into the manifest.
    for (auto it = b.clocks.begin(); it != b.clocks.end();) {
      const bool present = (it->first == "frontal" && !b.frontal.empty()) || (it->first == "thermal-left") ||
                           (it->first == "thermal-right" && b.thermal_right) || it->first == "side-low" ||
                           it->first == "side-high";
      it = present ? std::next(it) : b.clocks.erase(it);
    }
    return session::save_session(out_root, b);
  });
}

}  // namespace gate::cli
