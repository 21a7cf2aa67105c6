#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "gate/imgcore/canny.hpp"
#include "gate/imgcore/components.hpp"
#include "gate/imgcore/morphology.hpp"
#include "gate/imgcore/otsu.hpp"
#include "gate/wagonid/voting.hpp"

namespace gate::wagonid {

struct Line {
  double slope = 0;
  double intercept = 0;
};

/// A salient region kept as part of the identifier.
struct CharRegion {
  std::size_t component = 0;
  BBox box;
  std::uint32_t votes = 0;
  double weighted = 0;
};

struct IdSegmentation {
  BBox id_box;
  std::vector<BBox> char_boxes;  ///< left to right
  std::vector<CharRegion> regions;  ///< same order as char_boxes
  VoteVector votes;
  Line fitted_line;
  int otsu_threshold = 0;
  double elapsed_ms = 0;
};

/// Least-squares y = slope*x + intercept through the given anchors. Horizontal through the
/// mean when x has no spread.
inline Line fit_line_lsq(std::span<const Point> pts) {
  if (pts.empty()) return {};
  double sx = 0, sy = 0;
  for (const auto& p : pts) sx += p.x, sy += p.y;
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0) return {0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Edges (Otsu-driven Canny) -> disk dilation -> hole fill -> connected components.
inline LabeledComponents extract_regions(const GrayImage& img, const SegmentationParams& p, int* threshold_out = nullptr) {
  const auto otsu = otsu_threshold(img);
  if (threshold_out) *threshold_out = otsu.threshold;
  if (otsu.degenerate) {
    LabeledComponents none;
    none.labels = LabelImage(img.width(), img.height(), 0);
    return none;
  }
  CannyOptions co;
  co.strip_cols = p.strip_cols;
  const double t = otsu.threshold;
  const auto edges = canny_edges(img, t, 0.5 * t, co);
  return connected_components(fill_holes(dilate_disk(edges, p.r_D)));
}

/// Salient-region selection from weighted votes: every component with weighted > 0.
inline IdSegmentation select_salient(const LabeledComponents& cc, const VoteVector& weighted, Dims dims,
                                     const SegmentationParams& p) {
  IdSegmentation seg;
  seg.votes = weighted;
  for (std::size_t i = 0; i < weighted.weighted.size(); ++i) {
    if (weighted.weighted[i] > 0) {
      seg.regions.push_back({i, cc.boxes[i], weighted.votes[i], weighted.weighted[i]});
    }
  }
  std::sort(seg.regions.begin(), seg.regions.end(), [](const CharRegion& a, const CharRegion& b) {
    return a.box.x != b.box.x ? a.box.x < b.box.x : a.component < b.component;
  });
  std::vector<Point> anchors;
  for (const auto& r : seg.regions) {
    seg.char_boxes.push_back(r.box);
    seg.id_box = unite(seg.id_box, r.box);
    anchors.push_back(corner(r.box));
  }
  const BBox padded{seg.id_box.x - p.r_D, seg.id_box.y - p.r_D, seg.id_box.w + 2 * p.r_D, seg.id_box.h + 2 * p.r_D};
  seg.id_box = intersect(padded, {0, 0, dims.w, dims.h});
  seg.fitted_line = fit_line_lsq(anchors);
  return seg;
}

/// Locates the wagon identifier in a side-view mosaic.
///
/// Throws Errc::no_candidates when nothing collects a vote and Errc::low_confidence when
/// fewer than params.min_char_boxes regions survive.
inline IdSegmentation segment_wagon_id(const GrayImage& img, const SegmentationParams& p, std::uint64_t rng_seed,
                                       unsigned workers = 1) {
  p.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Dims dims{img.width(), img.height()};
  int threshold = 0;
  const auto cc = extract_regions(img, p, &threshold);
  const auto votes = vote_sweep(cc, dims, p, rng_seed, workers);
  const auto weighted = weight_votes(cc, votes, p.top_k, dims);
  auto seg = select_salient(cc, weighted, dims, p);
  seg.otsu_threshold = threshold;
  if (static_cast<int>(seg.char_boxes.size()) < p.min_char_boxes) {
    throw Error(Errc::low_confidence,
                "only " + std::to_string(seg.char_boxes.size()) + " character regions survived");
  }
  seg.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return seg;
}

}  // namespace gate::wagonid
