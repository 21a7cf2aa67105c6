#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "gate/core/error.hpp"
#include "gate/imgcore/image.hpp"

namespace gate::pantograph {

using Homography = Eigen::Matrix3d;

struct Vec2 {
  double x = 0;
  double y = 0;
};

struct Correspondence {
  Vec2 src;  ///< template coordinates
  Vec2 dst;  ///< scene coordinates
};

/// Returns nullopt when the point maps to infinity.
inline std::optional<Vec2> apply(const Homography& H, Vec2 p) {
  const double w = H(2, 0) * p.x + H(2, 1) * p.y + H(2, 2);
  if (std::fabs(w) < 1e-12) return std::nullopt;
  return Vec2{(H(0, 0) * p.x + H(0, 1) * p.y + H(0, 2)) / w, (H(1, 0) * p.x + H(1, 1) * p.y + H(1, 2)) / w};
}

inline double reprojection_error(const Homography& H, const Correspondence& c) {
  const auto p = apply(H, c.src);
  if (!p) return std::numeric_limits<double>::infinity();
  return std::hypot(p->x - c.dst.x, p->y - c.dst.y);
}

namespace detail {

/// Similarity moving the centroid to the origin with mean distance sqrt(2).
template <typename Get>
Eigen::Matrix3d normalizer(std::span<const Correspondence> pts, Get get) {
  double cx = 0, cy = 0;
  for (const auto& c : pts) cx += get(c).x, cy += get(c).y;
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean = 0;
  for (const auto& c : pts) mean += std::hypot(get(c).x - cx, get(c).y - cy);
  mean /= static_cast<double>(pts.size());
  const double s = mean > 0 ? std::numbers::sqrt2 / mean : 1.0;
  Eigen::Matrix3d T;
  T << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return T;
}

inline double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool has_collinear_triple(const std::array<Vec2, 4>& p, double tol) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k)
        if (std::fabs(cross(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(k)])) <= tol) return true;
  return false;
}

}  // namespace detail

/// Normalized direct linear transform over >= 4 correspondences; h33 scaled to 1.
inline std::optional<Homography> fit_homography(std::span<const Correspondence> pts) {
  if (pts.size() < 4) return std::nullopt;
  const Eigen::Matrix3d Ts = detail::normalizer(pts, [](const Correspondence& c) { return c.src; });
  const Eigen::Matrix3d Td = detail::normalizer(pts, [](const Correspondence& c) { return c.dst; });
  Eigen::MatrixXd A(2 * pts.size(), 9);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector3d s = Ts * Eigen::Vector3d(pts[i].src.x, pts[i].src.y, 1);
    const Eigen::Vector3d d = Td * Eigen::Vector3d(pts[i].dst.x, pts[i].dst.y, 1);
    const auto r = static_cast<Eigen::Index>(2 * i);
    A.row(r) << -s.x(), -s.y(), -1, 0, 0, 0, d.x() * s.x(), d.x() * s.y(), d.x();
    A.row(r + 1) << 0, 0, 0, -s.x(), -s.y(), -1, d.y() * s.x(), d.y() * s.y(), d.y();
  }
  Eigen::Matrix<double, 9, 1> h;
  if (A.rows() < 9) {
    // Square up so the full right singular basis is available.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(9, 9);
    B.topRows(A.rows()) = A;
    A = B;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  h = svd.matrixV().col(8);
  Eigen::Matrix3d Hn;
  Hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Homography H = Td.inverse() * Hn * Ts;
  if (!H.allFinite() || std::fabs(H(2, 2)) < 1e-12) return std::nullopt;
  H /= H(2, 2);
  return H;
}

struct RansacParams {
  int iters = 1000;
  double tol = 3.0;
};

struct RansacFit {
  Homography H = Homography::Identity();
  std::vector<std::size_t> inliers;  ///< ascending indices into the correspondences
  int best_hypothesis_inliers = 0;
};

inline std::vector<std::size_t> inliers_of(const Homography& H, std::span<const Correspondence> pts, double tol) {
  std::vector<std::size_t> in;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (reprojection_error(H, pts[i]) <= tol) in.push_back(i);
  return in;
}

inline double residual_sum(const Homography& H, std::span<const Correspondence> pts, const std::vector<std::size_t>& in) {
  double s = 0;
  for (auto i : in) s += reprojection_error(H, pts[i]) * reprojection_error(H, pts[i]);
  return s;
}

/// Best-inlier-count hypothesis over `iters` 4-point samples (ties go to the smaller squared
/// residual over the inliers, then to the first found), then refit on its inliers; the refit
/// is kept only if it does not lose support.
inline RansacFit ransac_fit_projective(std::span<const Correspondence> pts, const RansacParams& p, std::uint64_t seed) {
  if (pts.size() < 4) throw Error(Errc::insufficient_matches, "projective fit needs at least 4 matches");
  if (p.iters < 1 || p.tol <= 0) throw Error(Errc::invalid_argument, "bad RANSAC parameters");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  RansacFit best;
  double best_res = 0;
  bool have = false;
  for (int it = 0; it < p.iters; ++it) {
    std::array<std::size_t, 4> idx{};
    std::array<Correspondence, 4> sample{};
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (int k = 0; k < 4; ++k) {
        std::size_t v;
        do v = pick(rng);
        while (std::find(idx.begin(), idx.begin() + k, v) != idx.begin() + k);
        idx[static_cast<std::size_t>(k)] = v;
        sample[static_cast<std::size_t>(k)] = pts[v];
      }
      std::array<Vec2, 4> s{}, d{};
      for (int k = 0; k < 4; ++k) s[static_cast<std::size_t>(k)] = sample[static_cast<std::size_t>(k)].src, d[static_cast<std::size_t>(k)] = sample[static_cast<std::size_t>(k)].dst;
      ok = !detail::has_collinear_triple(s, 1e-6) && !detail::has_collinear_triple(d, 1e-6);
      if (pts.size() == 4) break;
    }
    if (!ok) continue;
    const auto H = fit_homography(sample);
    if (!H) continue;
    auto in = inliers_of(*H, pts, p.tol);
    if (have && in.size() < best.inliers.size()) continue;
    const double res = residual_sum(*H, pts, in);
    if (!have || in.size() > best.inliers.size() || res < best_res) {
      best.H = *H;
      best.inliers = std::move(in);
      best_res = res;
      have = true;
      if (best.inliers.size() == pts.size()) break;
    }
  }
  if (!have) throw Error(Errc::insufficient_matches, "every sample was degenerate");
  best.best_hypothesis_inliers = static_cast<int>(best.inliers.size());
  for (int round = 0; round < 2 && best.inliers.size() >= 4; ++round) {
    std::vector<Correspondence> sub;
    for (auto i : best.inliers) sub.push_back(pts[i]);
    const auto H = fit_homography(sub);
    if (!H) break;
    auto in = inliers_of(*H, pts, p.tol);
    if (in.size() < best.inliers.size()) break;
    best.H = *H;
    best.inliers = std::move(in);
  }
  return best;
}

struct GeomCheck {
  bool accepted = false;
  BBox p_bbox;
  std::string reason;  ///< empty when accepted
  std::array<Vec2, 4> corners{};
};

struct GeomCriteria {
  int min_inliers = 8;
  double min_area_ratio = 0.25;
  double max_area_ratio = 4.0;
  double margin = 0.10;
};

inline GeomCheck check_geom_consistency(const Homography& H, std::size_t inliers, int template_w, int template_h,
                                        int scene_w, int scene_h, const GeomCriteria& c = {}) {
  GeomCheck r;
  if (inliers < static_cast<std::size_t>(c.min_inliers)) {
    r.reason = "too few inliers";
    return r;
  }
  const std::array<Vec2, 4> tc{Vec2{0, 0}, Vec2{double(template_w), 0}, Vec2{double(template_w), double(template_h)},
                               Vec2{0, double(template_h)}};
  for (int i = 0; i < 4; ++i) {
    // Corners behind the camera plane (w <= 0) cannot come from a real view.
    const auto& p = tc[static_cast<std::size_t>(i)];
    if (H(2, 0) * p.x + H(2, 1) * p.y + H(2, 2) <= 0) {
      r.reason = "corner maps through infinity";
      return r;
    }
    r.corners[static_cast<std::size_t>(i)] = *apply(H, p);
  }
  // Template corners run clockwise on screen (positive cross products in y-down coordinates).
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = r.corners[static_cast<std::size_t>(i)];
    const Vec2& b = r.corners[static_cast<std::size_t>((i + 1) % 4)];
    const Vec2& d = r.corners[static_cast<std::size_t>((i + 2) % 4)];
    if (detail::cross(a, b, d) <= 0) {
      r.reason = "quadrilateral is not convex with template winding";
      return r;
    }
  }
  double area = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = r.corners[static_cast<std::size_t>(i)];
    const Vec2& b = r.corners[static_cast<std::size_t>((i + 1) % 4)];
    area += a.x * b.y - b.x * a.y;
  }
  const double ratio = 0.5 * area / (static_cast<double>(template_w) * template_h);
  if (ratio < c.min_area_ratio || ratio > c.max_area_ratio) {
    r.reason = "area ratio out of range";
    return r;
  }
  const double mx = c.margin * scene_w, my = c.margin * scene_h;
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& p : r.corners) {
    if (p.x < -mx || p.x > scene_w + mx || p.y < -my || p.y > scene_h + my) {
      r.reason = "corner outside the scene margin";
      return r;
    }
    x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
  }
  const BBox raw{static_cast<int>(std::floor(x0)), static_cast<int>(std::floor(y0)),
                 static_cast<int>(std::ceil(x1)) - static_cast<int>(std::floor(x0)),
                 static_cast<int>(std::ceil(y1)) - static_cast<int>(std::floor(y0))};
  r.p_bbox = intersect(raw, {0, 0, scene_w, scene_h});
  if (r.p_bbox.empty()) {
    r.reason = "warped template does not overlap the scene";
    return r;
  }
  r.accepted = true;
  return r;
}

}  // namespace gate::pantograph
