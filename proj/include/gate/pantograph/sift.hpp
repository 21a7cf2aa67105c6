#pragma once

// Scale-invariant keypoints and 128-d gradient-histogram descriptors (Lowe's construction):
// Gaussian/DoG pyramid, 3-D extrema with quadratic refinement, contrast and edge rejection,
// 36-bin orientation assignment and a 4x4x8 trilinearly interpolated descriptor.
// Image coordinates are y-down; orientations are measured in that frame.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gate/core/error.hpp"
#include "gate/imgcore/image.hpp"

namespace gate::pantograph {

inline constexpr int kDescriptorSize = 128;
using Descriptor = std::array<float, kDescriptorSize>;

struct Keypoint {
  float x = 0;            ///< image coordinates
  float y = 0;
  float scale = 0;        ///< blur sigma in image pixels
  float orientation = 0;  ///< radians in [0, 2pi)
  float response = 0;     ///< |DoG| at the refined extremum
  int octave = 0;
};

struct SiftParams {
  int octaves = 3;
  int scales = 3;  ///< per octave
  double contrast = 0.03;
  double edge = 10;
  double sigma = 1.6;
  double init_sigma = 0.5;
};

struct Features {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;
};

namespace detail {

using Plane = Raster<float>;

inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

inline Plane gaussian_blur(const Plane& src, double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(4 * sigma)));
  std::vector<float> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0;
  for (int i = -r; i <= r; ++i) sum += k[static_cast<std::size_t>(i + r)] = static_cast<float>(std::exp(-0.5 * i * i / (sigma * sigma)));
  for (auto& v : k) v = static_cast<float>(v / sum);
  const int w = src.width(), h = src.height();
  Plane tmp(w, h), out(w, h);
  std::vector<float> line(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < h; ++y) {
    const auto row = src.row(y);
    for (int x = -r; x < w + r; ++x) line[static_cast<std::size_t>(x + r)] = row[static_cast<std::size_t>(reflect101(x, w))];
    auto dst = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = 0; i <= 2 * r; ++i) acc += k[static_cast<std::size_t>(i)] * line[static_cast<std::size_t>(x + i)];
      dst[static_cast<std::size_t>(x)] = acc;
    }
  }
  std::vector<int> ry(static_cast<std::size_t>(h + 2 * r));
  for (int y = -r; y < h + r; ++y) ry[static_cast<std::size_t>(y + r)] = reflect101(y, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (int i = 0; i <= 2 * r; ++i) {
      const float kv = k[static_cast<std::size_t>(i)];
      const auto srow = tmp.row(ry[static_cast<std::size_t>(y + i)]);
      for (int x = 0; x < w; ++x) dst[static_cast<std::size_t>(x)] += kv * srow[static_cast<std::size_t>(x)];
    }
  }
  return out;
}

inline Plane downsample(const Plane& src) {
  Plane out(std::max(1, src.width() / 2), std::max(1, src.height() / 2));
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = src(2 * x, 2 * y);
  return out;
}

struct Pyramid {
  std::vector<std::vector<Plane>> gauss;  ///< [octave][scales + 3]
  std::vector<std::vector<Plane>> dog;    ///< [octave][scales + 2]
};

inline Pyramid build_pyramid(const GrayImage& img, const SiftParams& p) {
  Plane base(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) base(x, y) = img(x, y) / 255.0f;
  base = gaussian_blur(base, std::sqrt(std::max(0.01, p.sigma * p.sigma - p.init_sigma * p.init_sigma)));

  const int layers = p.scales + 3;
  std::vector<double> inc(static_cast<std::size_t>(layers));
  const double k = std::pow(2.0, 1.0 / p.scales);
  inc[0] = p.sigma;
  for (int i = 1; i < layers; ++i) {
    const double prev = p.sigma * std::pow(k, i - 1);
    const double total = prev * k;
    inc[static_cast<std::size_t>(i)] = std::sqrt(total * total - prev * prev);
  }

  Pyramid pyr;
  for (int o = 0; o < p.octaves; ++o) {
    std::vector<Plane> g;
    g.reserve(static_cast<std::size_t>(layers));
    g.push_back(o == 0 ? base : downsample(pyr.gauss.back()[static_cast<std::size_t>(p.scales)]));
    for (int i = 1; i < layers; ++i) g.push_back(gaussian_blur(g.back(), inc[static_cast<std::size_t>(i)]));
    std::vector<Plane> d;
    for (int i = 0; i + 1 < layers; ++i) {
      Plane diff(g[0].width(), g[0].height());
      const auto a = g[static_cast<std::size_t>(i)].pixels();
      const auto b = g[static_cast<std::size_t>(i + 1)].pixels();
      auto out = diff.pixels();
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = b[j] - a[j];
      d.push_back(std::move(diff));
    }
    pyr.gauss.push_back(std::move(g));
    pyr.dog.push_back(std::move(d));
    if (pyr.gauss.back()[0].width() < 24 || pyr.gauss.back()[0].height() < 24) break;
  }
  return pyr;
}

constexpr int kBorder = 5;

struct Refined {
  int x, y, layer;
  double dx, dy, ds, contrast;
};

inline bool refine_extremum(const std::vector<Plane>& dog, int x, int y, int layer, const SiftParams& p, Refined& out) {
  const int w = dog[0].width(), h = dog[0].height();
  double X[3] = {0, 0, 0};
  double g[3] = {0, 0, 0};
  int it = 0;
  for (; it < 5; ++it) {
    const Plane& c = dog[static_cast<std::size_t>(layer)];
    const Plane& prv = dog[static_cast<std::size_t>(layer - 1)];
    const Plane& nxt = dog[static_cast<std::size_t>(layer + 1)];
    const double v = c(x, y);
    g[0] = (c(x + 1, y) - c(x - 1, y)) * 0.5;
    g[1] = (c(x, y + 1) - c(x, y - 1)) * 0.5;
    g[2] = (nxt(x, y) - prv(x, y)) * 0.5;
    const double dxx = c(x + 1, y) + c(x - 1, y) - 2 * v;
    const double dyy = c(x, y + 1) + c(x, y - 1) - 2 * v;
    const double dss = nxt(x, y) + prv(x, y) - 2 * v;
    const double dxy = (c(x + 1, y + 1) - c(x - 1, y + 1) - c(x + 1, y - 1) + c(x - 1, y - 1)) * 0.25;
    const double dxs = (nxt(x + 1, y) - nxt(x - 1, y) - prv(x + 1, y) + prv(x - 1, y)) * 0.25;
    const double dys = (nxt(x, y + 1) - nxt(x, y - 1) - prv(x, y + 1) + prv(x, y - 1)) * 0.25;
    // Solve H X = -g by Cramer's rule.
    const double H[3][3] = {{dxx, dxy, dxs}, {dxy, dyy, dys}, {dxs, dys, dss}};
    const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                       H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                       H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
    if (std::fabs(det) < 1e-18) return false;
    for (int col = 0; col < 3; ++col) {
      double M[3][3];
      for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) M[r][cc] = cc == col ? -g[r] : H[r][cc];
      X[col] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
               det;
    }
    if (std::fabs(X[0]) < 0.5 && std::fabs(X[1]) < 0.5 && std::fabs(X[2]) < 0.5) break;
    if (std::fabs(X[0]) > 1e6 || std::fabs(X[1]) > 1e6 || std::fabs(X[2]) > 1e6) return false;
    x += static_cast<int>(std::lround(X[0]));
    y += static_cast<int>(std::lround(X[1]));
    layer += static_cast<int>(std::lround(X[2]));
    if (layer < 1 || layer > p.scales || x < kBorder || x >= w - kBorder || y < kBorder || y >= h - kBorder) return false;
  }
  if (it >= 5) return false;

  const Plane& c = dog[static_cast<std::size_t>(layer)];
  const double v = c(x, y);
  const double contrast = v + 0.5 * (g[0] * X[0] + g[1] * X[1] + g[2] * X[2]);
  if (std::fabs(contrast) * p.scales < p.contrast) return false;
  const double dxx = c(x + 1, y) + c(x - 1, y) - 2 * v;
  const double dyy = c(x, y + 1) + c(x, y - 1) - 2 * v;
  const double dxy = (c(x + 1, y + 1) - c(x - 1, y + 1) - c(x + 1, y - 1) + c(x - 1, y - 1)) * 0.25;
  const double tr = dxx + dyy;
  const double det = dxx * dyy - dxy * dxy;
  if (det <= 0 || tr * tr * p.edge >= (p.edge + 1) * (p.edge + 1) * det) return false;
  out = {x, y, layer, X[0], X[1], X[2], contrast};
  return true;
}

inline std::vector<float> orientation_peaks(const Plane& img, int cx, int cy, double scl) {
  constexpr int n = 36;
  const int radius = static_cast<int>(std::lround(3 * 1.5 * scl));
  const double wsig = 1.5 * scl;
  const double expf_scale = -1.0 / (2.0 * wsig * wsig);
  std::array<double, n + 4> raw{};
  double* hist = raw.data() + 2;
  for (int i = -radius; i <= radius; ++i) {
    const int y = cy + i;
    if (y <= 0 || y >= img.height() - 1) continue;
    for (int j = -radius; j <= radius; ++j) {
      const int x = cx + j;
      if (x <= 0 || x >= img.width() - 1) continue;
      const double dx = img(x + 1, y) - img(x - 1, y);
      const double dy = img(x, y + 1) - img(x, y - 1);
      const double mag = std::sqrt(dx * dx + dy * dy);
      double ang = std::atan2(dy, dx);
      if (ang < 0) ang += 2 * std::numbers::pi;
      int bin = static_cast<int>(std::lround(n * ang / (2 * std::numbers::pi)));
      bin = ((bin % n) + n) % n;
      hist[bin] += mag * std::exp((i * i + j * j) * expf_scale);
    }
  }
  hist[-1] = hist[n - 1];
  hist[-2] = hist[n - 2];
  hist[n] = hist[0];
  hist[n + 1] = hist[1];
  std::array<double, n> sm{};
  for (int i = 0; i < n; ++i)
    sm[static_cast<std::size_t>(i)] =
        (hist[i - 2] + hist[i + 2]) * (1.0 / 16) + (hist[i - 1] + hist[i + 1]) * (4.0 / 16) + hist[i] * (6.0 / 16);
  const double mx = *std::max_element(sm.begin(), sm.end());
  std::vector<float> out;
  if (mx <= 0) return out;
  for (int i = 0; i < n; ++i) {
    const double l = sm[static_cast<std::size_t>((i + n - 1) % n)];
    const double r = sm[static_cast<std::size_t>((i + 1) % n)];
    const double c = sm[static_cast<std::size_t>(i)];
    if (c > l && c > r && c >= 0.8 * mx) {
      double bin = i + 0.5 * (l - r) / (l - 2 * c + r);
      if (bin < 0) bin += n;
      if (bin >= n) bin -= n;
      double ang = 2 * std::numbers::pi * bin / n;
      if (ang >= 2 * std::numbers::pi) ang = 0;
      out.push_back(static_cast<float>(ang));
    }
  }
  return out;
}

inline bool compute_descriptor(const Plane& img, double px, double py, double ori, double scl, Descriptor& out) {
  constexpr int d = 4, n = 8;
  const double hist_width = 3.0 * scl;
  const double cos_t = std::cos(ori) / hist_width;
  const double sin_t = std::sin(ori) / hist_width;
  const double exp_scale = -1.0 / (d * d * 0.5);
  int radius = static_cast<int>(std::lround(hist_width * std::numbers::sqrt2 * (d + 1) * 0.5));
  radius = std::min(radius, static_cast<int>(std::sqrt(double(img.width()) * img.width() + double(img.height()) * img.height())));
  const int cx = static_cast<int>(std::lround(px));
  const int cy = static_cast<int>(std::lround(py));

  std::array<double, (d + 2) * (d + 2) * (n + 2)> hist{};
  auto H = [&hist](int r, int c, int o) -> double& { return hist[static_cast<std::size_t>(((r * (d + 2)) + c) * (n + 2) + o)]; };
  for (int i = -radius; i <= radius; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      // Offset expressed in the keypoint frame (rotate by -ori).
      const double c_rot = j * cos_t + i * sin_t;
      const double r_rot = -j * sin_t + i * cos_t;
      const double rbin = r_rot + d / 2.0 - 0.5;
      const double cbin = c_rot + d / 2.0 - 0.5;
      const int y = cy + i, x = cx + j;
      if (!(rbin > -1 && rbin < d && cbin > -1 && cbin < d)) continue;
      if (y <= 0 || y >= img.height() - 1 || x <= 0 || x >= img.width() - 1) continue;
      const double dx = img(x + 1, y) - img(x - 1, y);
      const double dy = img(x, y + 1) - img(x, y - 1);
      double rel = std::atan2(dy, dx) - ori;
      rel = std::fmod(rel, 2 * std::numbers::pi);
      if (rel < 0) rel += 2 * std::numbers::pi;
      double obin = rel * n / (2 * std::numbers::pi);
      const double mag = std::sqrt(dx * dx + dy * dy) * std::exp((c_rot * c_rot + r_rot * r_rot) * exp_scale);

      const int r0 = static_cast<int>(std::floor(rbin));
      const int c0 = static_cast<int>(std::floor(cbin));
      int o0 = static_cast<int>(std::floor(obin));
      const double fr = rbin - r0, fc = cbin - c0, fo = obin - o0;
      if (o0 >= n) o0 -= n;
      const double v_r1 = mag * fr, v_r0 = mag - v_r1;
      const double v_rc11 = v_r1 * fc, v_rc10 = v_r1 - v_rc11;
      const double v_rc01 = v_r0 * fc, v_rc00 = v_r0 - v_rc01;
      H(r0 + 1, c0 + 1, o0) += v_rc00 * (1 - fo);
      H(r0 + 1, c0 + 1, o0 + 1) += v_rc00 * fo;
      H(r0 + 1, c0 + 2, o0) += v_rc01 * (1 - fo);
      H(r0 + 1, c0 + 2, o0 + 1) += v_rc01 * fo;
      H(r0 + 2, c0 + 1, o0) += v_rc10 * (1 - fo);
      H(r0 + 2, c0 + 1, o0 + 1) += v_rc10 * fo;
      H(r0 + 2, c0 + 2, o0) += v_rc11 * (1 - fo);
      H(r0 + 2, c0 + 2, o0 + 1) += v_rc11 * fo;
    }
  }
  std::array<double, kDescriptorSize> v{};
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      H(r + 1, c + 1, 0) += H(r + 1, c + 1, n);
      for (int o = 0; o < n; ++o) v[static_cast<std::size_t>((r * d + c) * n + o)] = H(r + 1, c + 1, o);
    }
  double norm = 0;
  for (double a : v) norm += a * a;
  norm = std::sqrt(norm);
  if (norm <= 1e-12) return false;
  const double clip = 0.2 * norm;
  norm = 0;
  for (double& a : v) {
    a = std::min(a, clip);
    norm += a * a;
  }
  norm = std::sqrt(norm);
  for (int i = 0; i < kDescriptorSize; ++i) out[static_cast<std::size_t>(i)] = static_cast<float>(v[static_cast<std::size_t>(i)] / norm);
  return true;
}

}  // namespace detail

inline Features extract_features(const GrayImage& img, const SiftParams& p = {}) {
  if (img.width() < 32 || img.height() < 32) throw Error(Errc::image_too_small, "feature extraction needs at least 32x32 pixels");
  if (p.octaves < 1 || p.scales < 1 || p.contrast <= 0 || p.edge <= 0) throw Error(Errc::invalid_argument, "bad feature parameters");
  const auto pyr = detail::build_pyramid(img, p);
  const float pre = static_cast<float>(0.5 * p.contrast / p.scales);
  Features out;
  for (std::size_t o = 0; o < pyr.dog.size(); ++o) {
    const auto& dog = pyr.dog[o];
    const int w = dog[0].width(), h = dog[0].height();
    const double octave_scale = std::ldexp(1.0, static_cast<int>(o));
    for (int layer = 1; layer <= p.scales; ++layer) {
      const auto& prv = dog[static_cast<std::size_t>(layer - 1)];
      const auto& cur = dog[static_cast<std::size_t>(layer)];
      const auto& nxt = dog[static_cast<std::size_t>(layer + 1)];
      for (int y = detail::kBorder; y < h - detail::kBorder; ++y) {
        for (int x = detail::kBorder; x < w - detail::kBorder; ++x) {
          const float v = cur(x, y);
          if (std::fabs(v) <= pre) continue;
          bool ext = true;
          for (int dy = -1; dy <= 1 && ext; ++dy)
            for (int dx = -1; dx <= 1 && ext; ++dx) {
              const float a = prv(x + dx, y + dy), b = nxt(x + dx, y + dy);
              const float c = (dx || dy) ? cur(x + dx, y + dy) : v;
              ext = v > 0 ? (v >= a && v >= b && v >= c) : (v <= a && v <= b && v <= c);
            }
          if (!ext) continue;
          detail::Refined r;
          if (!detail::refine_extremum(dog, x, y, layer, p, r)) continue;
          const double scl = p.sigma * std::pow(2.0, (r.layer + r.ds) / p.scales);  // octave-relative
          const auto& gimg = pyr.gauss[o][static_cast<std::size_t>(r.layer)];
          for (float ang : detail::orientation_peaks(gimg, r.x, r.y, scl)) {
            Descriptor d;
            if (!detail::compute_descriptor(gimg, r.x + r.dx, r.y + r.dy, ang, scl, d)) continue;
            Keypoint k;
            k.x = static_cast<float>((r.x + r.dx) * octave_scale);
            k.y = static_cast<float>((r.y + r.dy) * octave_scale);
            k.scale = static_cast<float>(scl * octave_scale);
            k.orientation = ang;
            k.response = static_cast<float>(std::fabs(r.contrast));
            k.octave = static_cast<int>(o);
            out.keypoints.push_back(k);
            out.descriptors.push_back(d);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace gate::pantograph
