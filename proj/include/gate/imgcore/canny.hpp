#pragma once

// Canny edge detector: Gaussian pre-smoothing (sigma 1.4), 3x3 Sobel gradients,
// non-maximum suppression and hysteresis.
//
// All arithmetic up to the threshold comparison is integer, so symmetric inputs give
// bit-identical gradient magnitudes and NMS ties resolve the same way every run.
// Thresholds are expressed in units of the L2 Sobel magnitude of the smoothed image.

#include <cmath>
#include <cstdint>
#include <vector>

#include "gate/imgcore/image.hpp"

namespace gate {

struct CannyOptions {
  double sigma = 1.4;
  /// Column strip width for the local stages; 0 processes the image in one piece.
  int strip_cols = 0;
};

namespace detail {

inline std::vector<std::int32_t> integer_gaussian(double sigma, int& radius) {
  radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> g(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    g[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += g[i + radius];
  }
  std::vector<std::int32_t> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = static_cast<std::int32_t>(std::lround(1024.0 * g[i] / sum));
  return w;
}

enum : std::uint8_t { kNoEdge = 0, kWeak = 1, kStrong = 2 };

// Classifies pixels of columns [x0, x1) into none / weak / strong NMS maxima, reading
// whatever halo it needs from the full image. Writes into `cls` (full image size).
inline void canny_classify_columns(const GrayImage& img, int x0, int x1, long double high2, long double low2,
                                   const std::vector<std::int32_t>& kernel, int radius,
                                   std::vector<std::uint8_t>& cls) {
  const int W = img.width();
  const int H = img.height();
  const int halo = 2;  // Sobel + NMS neighbourhood on top of the blurred band
  const int bx0 = std::max(0, x0 - halo);
  const int bx1 = std::min(W, x1 + halo);
  const int bw = bx1 - bx0;

  auto clampx = [W](int x) { return x < 0 ? 0 : (x >= W ? W - 1 : x); };
  auto clampy = [H](int y) { return y < 0 ? 0 : (y >= H ? H - 1 : y); };

  // Horizontal pass over the band (replicated border at the real image edge only).
  std::vector<std::int32_t> horiz(static_cast<std::size_t>(bw) * H);
  for (int y = 0; y < H; ++y) {
    auto src = img.row(y);
    for (int x = bx0; x < bx1; ++x) {
      std::int32_t acc = 0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * src[clampx(x + k)];
      horiz[static_cast<std::size_t>(y) * bw + (x - bx0)] = acc;
    }
  }
  std::vector<std::int32_t> blur(static_cast<std::size_t>(bw) * H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < bw; ++x) {
      std::int64_t acc = 0;
      for (int k = -radius; k <= radius; ++k) acc += static_cast<std::int64_t>(kernel[k + radius]) * horiz[static_cast<std::size_t>(clampy(y + k)) * bw + x];
      blur[static_cast<std::size_t>(y) * bw + x] = static_cast<std::int32_t>(acc);
    }
  }

  auto b = [&](int x, int y) -> std::int64_t {
    // x in image coordinates; the band always covers clampx(x) for the pixels we evaluate.
    return blur[static_cast<std::size_t>(clampy(y)) * bw + (clampx(x) - bx0)];
  };

  // Gradient for columns [gx0, gx1) where NMS needs one extra column on each side.
  const int gx0 = std::max(0, x0 - 1);
  const int gx1 = std::min(W, x1 + 1);
  const int gw = gx1 - gx0;
  std::vector<std::int64_t> gxv(static_cast<std::size_t>(gw) * H), gyv(gxv.size()), mag(gxv.size());
  for (int y = 0; y < H; ++y) {
    for (int x = gx0; x < gx1; ++x) {
      const std::int64_t gx = (b(x + 1, y - 1) + 2 * b(x + 1, y) + b(x + 1, y + 1)) -
                              (b(x - 1, y - 1) + 2 * b(x - 1, y) + b(x - 1, y + 1));
      const std::int64_t gy = (b(x - 1, y + 1) + 2 * b(x, y + 1) + b(x + 1, y + 1)) -
                              (b(x - 1, y - 1) + 2 * b(x, y - 1) + b(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * gw + (x - gx0);
      gxv[i] = gx;
      gyv[i] = gy;
      mag[i] = gx * gx + gy * gy;
    }
  }
  auto m = [&](int x, int y) -> std::int64_t {
    if (x < gx0 || x >= gx1 || y < 0 || y >= H) return 0;
    return mag[static_cast<std::size_t>(y) * gw + (x - gx0)];
  };

  constexpr long double kTan22 = 0.41421356237309504880L;
  for (int y = 0; y < H; ++y) {
    for (int x = x0; x < x1; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * gw + (x - gx0);
      const std::int64_t mv = mag[i];
      std::uint8_t c = kNoEdge;
      if (mv > 0 && static_cast<long double>(mv) >= low2) {
        const std::int64_t gx = gxv[i];
        const std::int64_t gy = gyv[i];
        const long double ax = std::fabs(static_cast<long double>(gx));
        const long double ay = std::fabs(static_cast<long double>(gy));
        int dx;
        int dy;
        if (ay <= ax * kTan22) {
          dx = 1, dy = 0;
        } else if (ax <= ay * kTan22) {
          dx = 0, dy = 1;
        } else if ((gx > 0) == (gy > 0)) {
          dx = 1, dy = 1;
        } else {
          dx = -1, dy = 1;
        }
        // Fixed axis orientation (not gradient sign): output is invariant to intensity inversion.
        if (mv > m(x - dx, y - dy) && mv >= m(x + dx, y + dy)) {
          c = static_cast<long double>(mv) >= high2 ? kStrong : kWeak;
        }
      }
      cls[static_cast<std::size_t>(y) * W + x] = c;
    }
  }
}

}  // namespace detail

/// Edge mask. Every returned pixel is an NMS maximum with magnitude >= t_low that is
/// 8-connected through such pixels to one with magnitude >= t_high.
inline BinaryImage canny_edges(const GrayImage& img, double t_high, double t_low, const CannyOptions& opt = {}) {
  if (img.empty()) throw Error(Errc::invalid_argument, "canny_edges on empty image");
  if (!(t_low >= 0 && t_low <= t_high && t_high <= 255)) {
    throw Error(Errc::invalid_argument, "canny thresholds must satisfy 0 <= t_low <= t_high <= 255");
  }
  int radius = 0;
  const auto kernel = detail::integer_gaussian(opt.sigma, radius);
  std::int64_t ksum = 0;
  for (auto w : kernel) ksum += w;
  const long double scale = static_cast<long double>(ksum) * ksum;  // 2-D kernel normalization
  const long double high2 = (t_high * scale) * (t_high * scale);
  const long double low2 = (t_low * scale) * (t_low * scale);

  const int W = img.width();
  const int H = img.height();
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(W) * H, detail::kNoEdge);
  const int strip = opt.strip_cols > 0 ? opt.strip_cols : W;
  for (int x0 = 0; x0 < W; x0 += strip) {
    detail::canny_classify_columns(img, x0, std::min(W, x0 + strip), high2, low2, kernel, radius, cls);
  }

  // Hysteresis over the whole image (non-local).
  BinaryImage out(W, H);
  auto o = out.pixels();
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] != detail::kStrong || o[i]) continue;
    o[i] = 1;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int px = static_cast<int>(p % W);
      const int py = static_cast<int>(p / W);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = px + dx;
          const int ny = py + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
          const std::size_t q = static_cast<std::size_t>(ny) * W + nx;
          if (cls[q] != detail::kNoEdge && !o[q]) {
            o[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace gate
