#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "gate/imgcore/image.hpp"

namespace gate {

using LabelImage = Raster<std::int32_t>;

/// 8-connected components. Label 0 is background; component i (1-based) has boxes[i-1]
/// and areas[i-1]. Labels follow first-encounter raster order.
struct LabeledComponents {
  LabelImage labels;
  std::vector<BBox> boxes;
  std::vector<long long> areas;

  std::size_t count() const { return boxes.size(); }
};

inline LabeledComponents connected_components(const BinaryImage& img) {
  const int W = img.width();
  const int H = img.height();
  LabeledComponents cc;
  cc.labels = LabelImage(W, H, 0);

  // Pass 1: provisional labels with union-find.
  std::vector<std::int32_t> parent{0};
  auto find = [&parent](std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  auto& L = cc.labels;
  for (int y = 0; y < H; ++y) {
    auto src = img.row(y);
    for (int x = 0; x < W; ++x) {
      if (!src[x]) continue;
      std::int32_t label = 0;
      const int nbr[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
      for (const auto& d : nbr) {
        const int nx = x + d[0];
        const int ny = y + d[1];
        if (nx < 0 || ny < 0 || nx >= W) continue;
        const std::int32_t l = L(nx, ny);
        if (!l) continue;
        if (!label) {
          label = l;
        } else {
          unite(label, l);
        }
      }
      if (!label) {
        label = static_cast<std::int32_t>(parent.size());
        parent.push_back(label);
      }
      L(x, y) = label;
    }
  }

  // Pass 2: final labels numbered by first raster encounter of each root.
  std::vector<std::int32_t> final_label(parent.size(), 0);
  std::int32_t next = 0;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      std::int32_t& l = L(x, y);
      if (!l) continue;
      const std::int32_t root = find(l);
      if (!final_label[root]) {
        final_label[root] = ++next;
        cc.boxes.push_back({x, y, 1, 1});
        cc.areas.push_back(0);
      }
      l = final_label[root];
      BBox& b = cc.boxes[l - 1];
      const int x0 = std::min(b.x, x);
      const int y0 = std::min(b.y, y);
      const int x1 = std::max(b.right(), x + 1);
      const int y1 = std::max(b.bottom(), y + 1);
      b = {x0, y0, x1 - x0, y1 - y0};
      ++cc.areas[l - 1];
    }
  }
  return cc;
}

}  // namespace gate
