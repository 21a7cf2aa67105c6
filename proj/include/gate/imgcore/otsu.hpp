#pragma once

#include <array>
#include <cstdint>

#include "gate/imgcore/image.hpp"

namespace gate {

using Histogram = std::array<std::uint64_t, 256>;

struct OtsuResult {
  int threshold = 0;
  /// Set when the image holds a single distinct intensity; callers treat it as all background.
  bool degenerate = false;
};

inline Histogram histogram(std::span<const std::uint8_t> pixels) {
  Histogram h{};
  for (auto v : pixels) ++h[v];
  return h;
}

namespace detail {

// Between-class score S0^2/n0 + S1^2/n1 as an exact fraction. Maximizing it minimizes the
// weighted intra-class variance, since the total sum of squares does not depend on t.
struct Fraction {
  __int128 num;
  __int128 den;
};

inline bool greater(const Fraction& a, const Fraction& b) { return a.num * b.den > b.num * a.den; }

}  // namespace detail

/// Otsu threshold over a histogram: the t minimizing intra-class variance of the split
/// {v <= t} / {v > t}, smallest t on ties.
inline OtsuResult otsu_threshold(const Histogram& hist) {
  std::uint64_t total = 0;
  std::uint64_t sum_total = 0;
  int distinct = 0;
  int only_value = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    sum_total += hist[v] * static_cast<std::uint64_t>(v);
    if (hist[v]) {
      ++distinct;
      only_value = v;
    }
  }
  if (total == 0) throw Error(Errc::invalid_argument, "otsu_threshold on empty image");
  if (distinct == 1) return {only_value, true};

  // Exact integer arithmetic fits in 128 bits up to a few million pixels; larger inputs fall
  // back to extended precision.
  constexpr std::uint64_t kExactLimit = 4'000'000;
  int best_t = 0;
  if (total <= kExactLimit) {
    detail::Fraction best{-1, 1};
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (int t = 0; t < 256; ++t) {
      n0 += hist[t];
      s0 += hist[t] * static_cast<std::uint64_t>(t);
      const std::uint64_t n1 = total - n0;
      const std::uint64_t s1 = sum_total - s0;
      detail::Fraction score;
      if (n0 == 0 || n1 == 0) {
        score = {static_cast<__int128>(sum_total) * sum_total, static_cast<__int128>(total)};
      } else {
        const __int128 a = static_cast<__int128>(s0) * s0 * n1;
        const __int128 b = static_cast<__int128>(s1) * s1 * n0;
        score = {a + b, static_cast<__int128>(n0) * n1};
      }
      if (best.num < 0 || detail::greater(score, best)) {
        best = score;
        best_t = t;
      }
    }
  } else {
    long double best = -1;
    long double n0 = 0;
    long double s0 = 0;
    const long double n = static_cast<long double>(total);
    const long double s = static_cast<long double>(sum_total);
    for (int t = 0; t < 256; ++t) {
      n0 += hist[t];
      s0 += static_cast<long double>(hist[t]) * t;
      const long double n1 = n - n0;
      const long double s1 = s - s0;
      long double score;
      if (n0 == 0 || n1 == 0) {
        score = s * s / n;
      } else {
        score = s0 * s0 / n0 + s1 * s1 / n1;
      }
      if (score > best) {
        best = score;
        best_t = t;
      }
    }
  }
  return {best_t, false};
}

inline OtsuResult otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw Error(Errc::invalid_argument, "otsu_threshold on empty image");
  return otsu_threshold(histogram(img.pixels()));
}

}  // namespace gate
