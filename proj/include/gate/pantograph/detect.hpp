#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <span>

#include "gate/core/json.hpp"
#include "gate/pantograph/homography.hpp"
#include "gate/pantograph/kdtree.hpp"
#include "gate/pantograph/sift.hpp"

namespace gate::pantograph {

/// Offline description of the template: its features and a 2-NN index over the descriptors.
struct FeatureModel {
  int template_w = 0;
  int template_h = 0;
  std::vector<Keypoint> keypoints;
  KdTree index;

  const std::vector<Descriptor>& descriptors() const { return index.points(); }
};

inline FeatureModel make_model(int w, int h, std::vector<Keypoint> kps, std::vector<Descriptor> desc) {
  if (kps.size() != desc.size()) throw Error(Errc::invalid_argument, "keypoint and descriptor counts differ");
  FeatureModel m;
  m.template_w = w;
  m.template_h = h;
  m.keypoints = std::move(kps);
  m.index = KdTree(std::move(desc));
  return m;
}

inline FeatureModel build_model(const GrayImage& templ, const SiftParams& p = {}) {
  auto f = extract_features(templ, p);
  return make_model(templ.width(), templ.height(), std::move(f.keypoints), std::move(f.descriptors));
}

/// Structure gains the model set is rendered at; spans the expected illumination range.
inline const std::vector<double> kIlluminationGains = {0.7, 0.85, 1.0, 1.15, 1.3};

/// The template's background level: the most frequent value on its border.
inline std::uint8_t template_background(const GrayImage& templ) {
  std::array<int, 256> hist{};
  for (int x = 0; x < templ.width(); ++x) ++hist[templ(x, 0)], ++hist[templ(x, templ.height() - 1)];
  for (int y = 1; y + 1 < templ.height(); ++y) ++hist[templ(0, y)], ++hist[templ(templ.width() - 1, y)];
  return static_cast<std::uint8_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
}

/// The template as it appears when only the structure (not the background) is lit by `gain`.
inline GrayImage illumination_variant(const GrayImage& templ, double gain) {
  const auto bg = template_background(templ);
  GrayImage out = templ;
  for (auto& v : out.pixels())
    if (v != bg) v = static_cast<std::uint8_t>(std::clamp(std::lround(gain * v), 0L, 255L));
  return out;
}

/// One model per illumination variant. Low structure gain pushes parts of the template
/// toward (or across) the background level, which changes their gradients; no single
/// rendering matches well across the whole range.
inline std::vector<FeatureModel> build_model_set(const GrayImage& templ, const SiftParams& p = {},
                                                 const std::vector<double>& gains = kIlluminationGains) {
  if (gains.empty()) throw Error(Errc::invalid_argument, "model set needs at least one gain");
  std::vector<FeatureModel> out;
  for (double g : gains) {
    if (!(g > 0)) throw Error(Errc::invalid_argument, "illumination gains must be positive");
    out.push_back(build_model(g == 1.0 ? templ : illumination_variant(templ, g), p));
  }
  return out;
}

struct PantographConfig {
  SiftParams sift;
  double ratio = 0.67;
  RansacParams ransac;
  GeomCriteria geom;
  bool exact_index = false;
  double index_eps = 0.05;
  double window_factor = 2.0;  ///< window width in template widths
  double stride = 0.5;         ///< fraction of the window width
};

struct PantographDetection {
  bool found = false;
  Homography H = Homography::Identity();
  int inliers = 0;
  int matches = 0;
  BBox p_bbox;
  BBox window;
  std::string reason;
  double elapsed_ms = 0;
};

inline std::vector<BBox> detection_windows(int scene_w, int scene_h, int template_w, const PantographConfig& cfg) {
  const int ww = std::max(32, static_cast<int>(std::lround(cfg.window_factor * template_w)));
  if (ww >= scene_w) return {{0, 0, scene_w, scene_h}};
  const int step = std::max(1, static_cast<int>(std::lround(cfg.stride * ww)));
  std::vector<BBox> out;
  for (int x = 0;; x += step) {
    if (x + ww >= scene_w) {
      out.push_back({scene_w - ww, 0, ww, scene_h});
      break;
    }
    out.push_back({x, 0, ww, scene_h});
  }
  return out;
}

/// Evaluates one window in scene coordinates; never throws for lack of evidence. Scene
/// features are matched against every model of the set (each with its own ratio test) and
/// the correspondences pooled for a single projective fit.
inline PantographDetection detect_in_window(const GrayImage& scene, const BBox& win, std::span<const FeatureModel> models,
                                            const PantographConfig& cfg, std::uint64_t seed) {
  PantographDetection d;
  d.window = win;
  const auto feats = extract_features(scene.crop(win), cfg.sift);
  // One scene location matched to (nearly) the same template location is one piece of
  // evidence, whether it comes from a duplicate-orientation keypoint or from another
  // illumination variant, and must not vote twice.
  std::vector<Correspondence> corr;
  for (const auto& model : models) {
    for (const auto& m : match_descriptors(model.index, feats.descriptors, cfg.ratio, {cfg.exact_index, cfg.index_eps})) {
      const auto& tk = model.keypoints[static_cast<std::size_t>(m.template_idx)];
      const auto& sk = feats.keypoints[static_cast<std::size_t>(m.scene_idx)];
      const Correspondence c{{tk.x, tk.y}, {sk.x + win.x, sk.y + win.y}};
      const bool dup = std::any_of(corr.begin(), corr.end(), [&](const Correspondence& o) {
        return o.dst.x == c.dst.x && o.dst.y == c.dst.y && std::hypot(o.src.x - c.src.x, o.src.y - c.src.y) <= 1.0;
      });
      if (!dup) corr.push_back(c);
    }
  }
  d.matches = static_cast<int>(corr.size());
  if (corr.size() < 4) {
    d.reason = "insufficient matches";
    return d;
  }
  RansacFit fit;
  try {
    fit = ransac_fit_projective(corr, cfg.ransac, seed);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_matches) throw;
    d.reason = "insufficient matches";
    return d;
  }
  d.H = fit.H;
  d.inliers = static_cast<int>(fit.inliers.size());
  const auto& m0 = models.front();
  const auto check = check_geom_consistency(fit.H, fit.inliers.size(), m0.template_w, m0.template_h, scene.width(),
                                            scene.height(), cfg.geom);
  d.found = check.accepted;
  d.p_bbox = check.p_bbox;
  d.reason = check.reason;
  return d;
}

inline PantographDetection detect_in_window(const GrayImage& scene, const BBox& win, const FeatureModel& model,
                                            const PantographConfig& cfg, std::uint64_t seed) {
  return detect_in_window(scene, win, std::span(&model, 1), cfg, seed);
}

/// Sliding-window detection: the accepted window with most inliers wins, ties to the leftmost.
/// When nothing is accepted the best-supported rejected window is reported with found = false.
inline PantographDetection detect_pantograph(const GrayImage& scene, std::span<const FeatureModel> models,
                                             const PantographConfig& cfg = {}, std::uint64_t seed = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  if (scene.width() < 32 || scene.height() < 32) throw Error(Errc::image_too_small, "scene must be at least 32x32");
  if (models.empty()) throw Error(Errc::invalid_argument, "empty model set");
  for (const auto& m : models)
    if (m.template_w != models.front().template_w || m.template_h != models.front().template_h)
      throw Error(Errc::invalid_argument, "model set mixes template sizes");
  PantographDetection best;
  bool have = false;
  for (const auto& win : detection_windows(scene.width(), scene.height(), models.front().template_w, cfg)) {
    auto d = detect_in_window(scene, win, models, cfg, seed);
    const bool better = !have || (d.found && !best.found) || (d.found == best.found && d.inliers > best.inliers);
    if (better) {
      best = std::move(d);
      have = true;
    }
  }
  if (!best.found) best.p_bbox = {};
  best.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return best;
}

inline PantographDetection detect_pantograph(const GrayImage& scene, const FeatureModel& model,
                                             const PantographConfig& cfg = {}, std::uint64_t seed = 1) {
  return detect_pantograph(scene, std::span(&model, 1), cfg, seed);
}

inline constexpr const char* kDetectionFormat = "gate.pantograph/1";

inline Json to_json(const PantographDetection& d, bool include_timing = false) {
  Json j;
  j["format"] = kDetectionFormat;
  j["found"] = d.found;
  Json h = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) h.push_back(d.H(r, c));
  j["homography"] = std::move(h);
  j["inliers"] = d.inliers;
  j["matches"] = d.matches;
  j["p_bbox"] = d.found ? box_json(d.p_bbox) : Json(nullptr);
  j["window"] = box_json(d.window);
  if (!d.found) j["reason"] = d.reason;
  if (include_timing) j["timing_ms"] = d.elapsed_ms;
  return j;
}

}  // namespace gate::pantograph
