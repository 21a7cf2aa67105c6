#pragma once

// Sliding-window line voting over the bottom-right corners of connected-component boxes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gate/core/parallel.hpp"
#include "gate/imgcore/components.hpp"
#include "gate/wagonid/params.hpp"

namespace gate::wagonid {

struct Point {
  double x = 0;
  double y = 0;
};

struct Dims {
  int w = 0;
  int h = 0;
};

/// Raw votes per component plus, once weight_votes ran, the alignment-weighted votes.
struct VoteVector {
  std::vector<std::uint32_t> votes;
  std::vector<double> weighted;
};

/// Anchor of a box: its literal bottom-right corner (x + w, y + h).
inline Point corner(const BBox& b) { return {static_cast<double>(b.right()), static_cast<double>(b.bottom())}; }

/// Indices of boxes whose bottom-right corner lies in the half-open window [j, j+d) x [k, k+d).
inline std::vector<std::size_t> select_cc(std::span<const BBox> boxes, int j, int k, int d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const int cx = boxes[i].right();
    const int cy = boxes[i].bottom();
    if (cx >= j && cx < j + d && cy >= k && cy < k + d) out.push_back(i);
  }
  return out;
}

/// Largest set of points within perpendicular distance `tol` of a line through two sampled
/// points. Deterministic for a given seed; the first hypothesis wins ties. Returned indices
/// are ascending.
inline std::vector<std::size_t> ransac_fit_line(std::span<const Point> pts, int iters, double tol,
                                                std::uint64_t rng_seed) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> best;
  if (n < 2) return best;

  const bool all_same = std::all_of(pts.begin(), pts.end(), [&](const Point& p) {
    return p.x == pts[0].x && p.y == pts[0].y;
  });
  if (all_same) {
    best.resize(n);
    std::iota(best.begin(), best.end(), std::size_t{0});
    return best;
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> cur;
  cur.reserve(n);
  for (int it = 0; it < iters; ++it) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (n == 2) b = 1 - a;
    if (a == b) continue;
    const double dx = pts[b].x - pts[a].x;
    const double dy = pts[b].y - pts[a].y;
    const double len = std::hypot(dx, dy);
    if (len == 0) continue;
    cur.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = std::fabs(dy * (pts[i].x - pts[a].x) - dx * (pts[i].y - pts[a].y)) / len;
      if (dist <= tol) cur.push_back(i);
    }
    if (cur.size() > best.size()) best = cur;
  }
  return best;
}

/// Components that take part in voting: big enough, and not taller than the height gate.
inline std::vector<bool> eligible_components(const LabeledComponents& cc, Dims dims, const SegmentationParams& p) {
  std::vector<bool> ok(cc.count());
  for (std::size_t i = 0; i < cc.count(); ++i) {
    ok[i] = cc.areas[i] >= p.min_area && cc.boxes[i].h <= p.max_height_frac * dims.h;
  }
  return ok;
}

/// Accumulates one vote per window for every RANSAC inlier component. Every window uses
/// the same seed, so equal point sets give equal inliers wherever they occur in the image.
inline VoteVector vote_sweep(const LabeledComponents& cc, Dims dims, const SegmentationParams& p,
                             std::uint64_t rng_seed, unsigned workers = 1) {
  p.validate();
  VoteVector out;
  out.votes.assign(cc.count(), 0);
  if (cc.count() == 0) return out;

  const auto ok = eligible_components(cc, dims, p);
  struct Anchor {
    int x;
    int y;
    std::size_t index;
  };
  std::vector<Anchor> anchors;
  for (std::size_t i = 0; i < cc.count(); ++i) {
    if (ok[i]) anchors.push_back({cc.boxes[i].right(), cc.boxes[i].bottom(), i});
  }
  std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) {
    return a.x != b.x ? a.x < b.x : a.index < b.index;
  });

  std::vector<std::pair<int, int>> windows;
  for (int j = 0; j <= dims.w; j += p.s)
    for (int k = 0; k <= dims.h; k += p.s) windows.emplace_back(j, k);

  std::vector<std::vector<std::uint32_t>> partial(std::max(1u, workers), std::vector<std::uint32_t>(cc.count(), 0));
  parallel_for(windows.size(), workers, [&](unsigned worker, std::size_t wi) {
    const auto [j, k] = windows[wi];
    auto lo = std::lower_bound(anchors.begin(), anchors.end(), j, [](const Anchor& a, int v) { return a.x < v; });
    std::vector<std::size_t> members;
    for (auto it = lo; it != anchors.end() && it->x < j + p.d; ++it) {
      if (it->y >= k && it->y < k + p.d) members.push_back(it->index);
    }
    if (static_cast<int>(members.size()) < p.min_window_points) return;
    std::sort(members.begin(), members.end());
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (auto idx : members) pts.push_back(corner(cc.boxes[idx]));
    for (auto in : ransac_fit_line(pts, p.ransac_iters, p.ransac_inlier_tol, rng_seed)) {
      ++partial[worker][members[in]];
    }
  });
  for (const auto& part : partial)
    for (std::size_t i = 0; i < cc.count(); ++i) out.votes[i] += part[i];
  return out;
}

namespace detail {
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace detail

/// Ranks the components with a nonzero vote (votes desc, then area desc, then leftmost)
/// and keeps the first top_k. Returned in rank order.
inline std::vector<std::size_t> top_voted(const LabeledComponents& cc, const VoteVector& v, int top_k) {
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < v.votes.size(); ++i)
    if (v.votes[i] > 0) cand.push_back(i);
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    if (v.votes[a] != v.votes[b]) return v.votes[a] > v.votes[b];
    if (cc.areas[a] != cc.areas[b]) return cc.areas[a] > cc.areas[b];
    if (cc.boxes[a].x != cc.boxes[b].x) return cc.boxes[a].x < cc.boxes[b].x;
    return a < b;
  });
  if (cand.size() > static_cast<std::size_t>(top_k)) cand.resize(static_cast<std::size_t>(top_k));
  return cand;
}

/// Alignment weighting: for the top_k voted regions, D_x / D_y are the absolute deviations of
/// each corner from the median corner of that set, normalized by image width / height, and
///   weighted = exp(-D_x) * votes + exp(-D_y) * votes.
/// Regions outside the top_k set get weight 0.
inline VoteVector weight_votes(const LabeledComponents& cc, VoteVector v, int top_k, Dims dims) {
  if (top_k < 2) throw Error(Errc::invalid_argument, "top_k must be >= 2");
  if (v.votes.size() != cc.count()) throw Error(Errc::mismatched_input, "vote vector does not match components");
  const auto sel = top_voted(cc, v, top_k);
  if (sel.empty()) throw Error(Errc::no_candidates, "no component received a vote");

  std::vector<double> xs, ys;
  for (auto i : sel) {
    xs.push_back(corner(cc.boxes[i]).x);
    ys.push_back(corner(cc.boxes[i]).y);
  }
  const double mx = detail::median(xs);
  const double my = detail::median(ys);
  v.weighted.assign(v.votes.size(), 0.0);
  for (auto i : sel) {
    const Point c = corner(cc.boxes[i]);
    const double dx = std::fabs(c.x - mx) / dims.w;
    const double dy = std::fabs(c.y - my) / dims.h;
    const double votes = v.votes[i];
    v.weighted[i] = std::exp(-dx) * votes + std::exp(-dy) * votes;
  }
  return v;
}

}  // namespace gate::wagonid
