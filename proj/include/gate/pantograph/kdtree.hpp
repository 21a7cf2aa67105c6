#pragma once

// KD-tree over 128-d descriptors answering 2-nearest-neighbour queries.
// Exact mode visits every node whose splitting plane is not strictly farther than the
// current second neighbour, so ties resolve to the lower index exactly as a linear scan.
// Approximate mode prunes with a (1 + eps) factor: reported distances are within that
// factor of the true ones.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "gate/pantograph/sift.hpp"

namespace gate::pantograph {

inline double squared_distance(const Descriptor& a, const Descriptor& b) {
  double s = 0;
  for (int i = 0; i < kDescriptorSize; ++i) {
    const double d = static_cast<double>(a[static_cast<std::size_t>(i)]) - b[static_cast<std::size_t>(i)];
    s += d * d;
  }
  return s;
}

struct Neighbors {
  int first = -1;
  int second = -1;
  double d1 = std::numeric_limits<double>::infinity();  ///< Euclidean distances
  double d2 = std::numeric_limits<double>::infinity();
};

struct SearchOptions {
  bool exact = true;
  double eps = 0.05;
};

class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<Descriptor> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw Error(Errc::too_few_descriptors, "index needs at least 2 descriptors");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<int>(order_.size()));
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Descriptor>& points() const { return points_; }

  Neighbors nearest2(const Descriptor& q, const SearchOptions& opt = {}) const {
    State st;
    st.shrink = opt.exact ? 1.0 : (1.0 + opt.eps) * (1.0 + opt.eps);
    search(0, q, st);
    Neighbors n;
    n.first = st.i1;
    n.second = st.i2;
    n.d1 = std::sqrt(st.s1);
    n.d2 = std::sqrt(st.s2);
    return n;
  }

 private:
  static constexpr int kLeafSize = 8;

  struct Node {
    int begin = 0, end = 0;  ///< range in order_ (leaves)
    int dim = -1;            ///< -1 for leaves
    float split = 0;
    int left = -1, right = -1;
  };

  struct State {
    double s1 = std::numeric_limits<double>::infinity();
    double s2 = std::numeric_limits<double>::infinity();
    int i1 = -1, i2 = -1;
    double shrink = 1;

    static bool before(double da, int ia, double db, int ib) { return da < db || (da == db && ia < ib); }
    void offer(double s, int i) {
      if (before(s, i, s1, i1 < 0 ? std::numeric_limits<int>::max() : i1)) {
        s2 = s1;
        i2 = i1;
        s1 = s;
        i1 = i;
      } else if (before(s, i, s2, i2 < 0 ? std::numeric_limits<int>::max() : i2)) {
        s2 = s;
        i2 = i;
      }
    }
  };

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;
    int best_dim = 0;
    double best_spread = -1;
    for (int d = 0; d < kDescriptorSize; ++d) {
      float lo = std::numeric_limits<float>::infinity(), hi = -lo;
      for (int i = begin; i < end; ++i) {
        const float v = points_[order_[static_cast<std::size_t>(i)]][static_cast<std::size_t>(d)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) best_spread = hi - lo, best_dim = d;
    }
    if (best_spread <= 0) return id;  // all identical: keep as a leaf
    const int mid = begin + (end - begin) / 2;
    auto key = [&](int idx) { return points_[static_cast<std::size_t>(idx)][static_cast<std::size_t>(best_dim)]; };
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
    const float split = key(order_[static_cast<std::size_t>(mid)]);
    nodes_[static_cast<std::size_t>(id)].dim = best_dim;
    nodes_[static_cast<std::size_t>(id)].split = split;
    // Left holds [begin, mid) with values <= split, right holds [mid, end) with values >= split.
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void search(int id, const Descriptor& q, State& st) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.dim < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int idx = order_[static_cast<std::size_t>(i)];
        st.offer(squared_distance(q, points_[static_cast<std::size_t>(idx)]), idx);
      }
      return;
    }
    const double diff = static_cast<double>(q[static_cast<std::size_t>(n.dim)]) - n.split;
    const int near = diff <= 0 ? n.left : n.right;
    const int far = diff <= 0 ? n.right : n.left;
    search(near, q, st);
    if (diff * diff * st.shrink <= st.s2) search(far, q, st);
  }

  std::vector<Descriptor> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

struct Match {
  int template_idx = 0;
  int scene_idx = 0;
  double d1 = 0;
  double d2 = 0;
  friend bool operator==(const Match&, const Match&) = default;
};

/// Each scene descriptor queries the template index; the pair survives iff d1 <= ratio * d2
/// (so two zero distances pass).
inline std::vector<Match> match_descriptors(const KdTree& index, std::span<const Descriptor> scene, double ratio = 0.67,
                                            const SearchOptions& opt = {}) {
  if (!(ratio > 0 && ratio <= 1)) throw Error(Errc::invalid_argument, "ratio must lie in (0, 1]");
  std::vector<Match> out;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const auto nn = index.nearest2(scene[i], opt);
    if (nn.second < 0) continue;
    if (nn.d1 <= ratio * nn.d2) out.push_back({nn.first, static_cast<int>(i), nn.d1, nn.d2});
  }
  return out;
}

}  // namespace gate::pantograph
