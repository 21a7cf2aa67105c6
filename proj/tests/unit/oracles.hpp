#pragma once

// Test-only reference implementations. They deliberately use the most direct algorithm
// available and share no code with the library paths they check.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "gate/imgcore/image.hpp"

namespace gate::oracle {

inline GrayImage random_gray(std::mt19937_64& rng, int w, int h) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> pick(0, 255);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(pick(rng));
  return img;
}

inline BinaryImage random_mask(std::mt19937_64& rng, int w, int h, double density) {
  BinaryImage m(w, h);
  std::bernoulli_distribution on(density);
  for (auto& p : m.pixels()) p = on(rng) ? 1 : 0;
  return m;
}

/// Exhaustive Otsu: for every t, directly sum squared deviations of each class from its
/// own mean (scaled by class size to stay in integers), then take the smallest argmin.
inline int otsu_bruteforce(const GrayImage& img) {
  const auto px = img.pixels();
  int best_t = 0;
  // Compare N * intra-class SS as exact rationals: n_c * sum (v - mean_c)^2 = n_c*Q_c - S_c^2.
  __int128 best_num = -1;
  __int128 best_den = 1;
  for (int t = 0; t < 256; ++t) {
    __int128 n0 = 0, n1 = 0, s0 = 0, s1 = 0, q0 = 0, q1 = 0;
    for (auto v : px) {
      if (v <= t) {
        ++n0, s0 += v, q0 += static_cast<__int128>(v) * v;
      } else {
        ++n1, s1 += v, q1 += static_cast<__int128>(v) * v;
      }
    }
    // intra = (Q0 - S0^2/n0) + (Q1 - S1^2/n1)  -> common denominator n0*n1 (empty class: term 0)
    __int128 num;
    __int128 den;
    if (n0 == 0) {
      num = n1 * q1 - s1 * s1, den = n1;
    } else if (n1 == 0) {
      num = n0 * q0 - s0 * s0, den = n0;
    } else {
      num = (n0 * q0 - s0 * s0) * n1 + (n1 * q1 - s1 * s1) * n0;
      den = n0 * n1;
    }
    if (best_num < 0 || num * best_den < best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return best_t;
}

/// Recursive-style (explicit stack) flood fill with 8-connectivity. Returns a label raster
/// with arbitrary numbering.
inline Raster<int> flood_labels(const BinaryImage& m, int connectivity = 8) {
  Raster<int> lab(m.width(), m.height(), 0);
  int next = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y) || lab(x, y)) continue;
      ++next;
      std::vector<std::pair<int, int>> st{{x, y}};
      lab(x, y) = next;
      while (!st.empty()) {
        auto [cx, cy] = st.back();
        st.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (connectivity == 4 && dx != 0 && dy != 0) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (!m.in_bounds(nx, ny) || !m(nx, ny) || lab(nx, ny)) continue;
            lab(nx, ny) = next;
            st.push_back({nx, ny});
          }
        }
      }
    }
  }
  return lab;
}

/// True when two label rasters induce the same partition (bijection between labels).
template <typename A, typename B>
bool same_partition(const A& a, const B& b) {
  std::map<long long, long long> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long long la = a.pixels()[i];
    const long long lb = b.pixels()[i];
    if ((la == 0) != (lb == 0)) return false;
    if (la == 0) continue;
    auto [it1, ins1] = ab.emplace(la, lb);
    if (!ins1 && it1->second != lb) return false;
    auto [it2, ins2] = ba.emplace(lb, la);
    if (!ins2 && it2->second != la) return false;
  }
  return true;
}

/// Complement of the background reachable from the border (4-connected).
inline BinaryImage fill_oracle(const BinaryImage& m) {
  BinaryImage bg(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) bg.pixels()[i] = m.pixels()[i] ? 0 : 1;
  const auto lab = flood_labels(bg, 4);
  std::vector<bool> border_label(m.size() + 1, false);
  for (int x = 0; x < m.width(); ++x) {
    border_label[lab(x, 0)] = true;
    border_label[lab(x, m.height() - 1)] = true;
  }
  for (int y = 0; y < m.height(); ++y) {
    border_label[lab(0, y)] = true;
    border_label[lab(m.width() - 1, y)] = true;
  }
  BinaryImage out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int l = lab.pixels()[i];
    out.pixels()[i] = (m.pixels()[i] || (l != 0 && !border_label[l])) ? 1 : 0;
  }
  return out;
}

/// Direct definition of disk dilation: p is set iff an input pixel lies within distance r.
inline BinaryImage dilate_oracle(const BinaryImage& m, int r) {
  BinaryImage out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      for (int dy = -r; dy <= r && !out(x, y); ++dy)
        for (int dx = -r; dx <= r; ++dx)
          if (dx * dx + dy * dy <= r * r && m.in_bounds(x + dx, y + dy) && m(x + dx, y + dy)) {
            out(x, y) = 1;
            break;
          }
  return out;
}

}  // namespace gate::oracle
