#pragma once

// Character-level and full-identifier scoring of segmentation results.
//
// A detected region "contains" a glyph when it covers at least half of the glyph's box.
// Each region can be credited with at most one glyph, so a region spanning two touching
// glyphs yields one TP and leaves the other glyph as a FN. Regions containing no glyph
// are FPs. All rates are percentages of TP + FN.

#include <algorithm>
#include <numeric>
#include <vector>

#include "gate/imgcore/image.hpp"

namespace gate::wagonid {

struct Counts {
  long long tp = 0;
  long long fn = 0;
  long long fp = 0;

  double accuracy() const { return tp + fn ? 100.0 * tp / (tp + fn) : 0.0; }
  double fn_rate() const { return tp + fn ? 100.0 * fn / (tp + fn) : 0.0; }
  double fp_rate() const { return tp + fn ? 100.0 * fp / (tp + fn) : 0.0; }

  Counts& operator+=(const Counts& o) {
    tp += o.tp, fn += o.fn, fp += o.fp;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct SegmentationMetrics {
  Counts chars;
  Counts full_id;
};

inline bool region_contains_glyph(const BBox& region, const BBox& glyph) {
  return 2 * intersect(region, glyph).area() >= glyph.area();
}

/// Scores one image. `predicted` is the list of regions classified as ID characters.
inline SegmentationMetrics score_image(const std::vector<BBox>& predicted, const std::vector<BBox>& truth) {
  SegmentationMetrics m;
  std::vector<bool> matched(truth.size(), false);
  std::vector<std::size_t> order(predicted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return predicted[a].x < predicted[b].x; });
  for (auto ri : order) {
    const BBox& r = predicted[ri];
    bool contains_any = false;
    long long best_overlap = -1;
    std::size_t best = truth.size();
    for (std::size_t g = 0; g < truth.size(); ++g) {
      if (!region_contains_glyph(r, truth[g])) continue;
      contains_any = true;
      if (matched[g]) continue;
      const long long ov = intersect(r, truth[g]).area();
      if (ov > best_overlap) best_overlap = ov, best = g;
    }
    if (best < truth.size()) {
      matched[best] = true;
      ++m.chars.tp;
    } else if (!contains_any) {
      ++m.chars.fp;
    }
  }
  for (bool b : matched)
    if (!b) ++m.chars.fn;
  if (m.chars.fn == 0 && !truth.empty()) {
    m.full_id.tp = 1;
  } else {
    m.full_id.fn = 1;
  }
  m.full_id.fp = m.chars.fp;
  return m;
}

inline SegmentationMetrics evaluate_segmentation(const std::vector<std::vector<BBox>>& predictions,
                                                 const std::vector<std::vector<BBox>>& ground_truth) {
  if (predictions.size() != ground_truth.size()) {
    throw Error(Errc::mismatched_input, "prediction and ground-truth lists differ in length");
  }
  SegmentationMetrics total;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto m = score_image(predictions[i], ground_truth[i]);
    total.chars += m.chars;
    total.full_id += m.full_id;
  }
  return total;
}

}  // namespace gate::wagonid
