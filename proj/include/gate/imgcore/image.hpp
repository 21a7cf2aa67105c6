#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gate/core/error.hpp"

namespace gate {

/// Axis-aligned box: top-left (x, y) and extent (w, h), half-open on the right/bottom.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }

  bool contains(const BBox& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  bool contains_point(int px, int py) const { return px >= x && px < right() && py >= y && py < bottom(); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline BBox intersect(const BBox& a, const BBox& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

inline BBox unite(const BBox& a, const BBox& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

inline double iou(const BBox& a, const BBox& b) {
  const double inter = static_cast<double>(intersect(a, b).area());
  const double uni = static_cast<double>(a.area() + b.area()) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

/// Row-major 2-D raster. The tag parameter keeps semantically different rasters
/// with the same pixel type (gray vs. binary) from mixing.
template <typename T, typename Tag = void>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(Errc::invalid_argument,
                  "raster dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) throw Error(Errc::invalid_argument, "raster dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(Errc::invalid_argument, "raster data length does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  BBox bounds() const { return {0, 0, width_, height_}; }

  /// Copy of the sub-rectangle `box`, which must lie inside the raster.
  Raster crop(const BBox& box) const {
    if (box.empty() || !bounds().contains(box)) throw Error(Errc::out_of_range, "crop box outside raster");
    Raster out(box.w, box.h);
    for (int y = 0; y < box.h; ++y) {
      auto src = row(box.y + y).subspan(static_cast<std::size_t>(box.x), static_cast<std::size_t>(box.w));
      std::copy(src.begin(), src.end(), out.row(y).begin());
    }
    return out;
  }

  /// Writes `src` with its top-left at (x, y); the part falling outside is dropped.
  void paste(const Raster& src, int x, int y) {
    const BBox dst = intersect(bounds(), {x, y, src.width(), src.height()});
    for (int yy = dst.y; yy < dst.bottom(); ++yy) {
      for (int xx = dst.x; xx < dst.right(); ++xx) (*this)(xx, yy) = src(xx - x, yy - y);
    }
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct BinaryTag;

using GrayImage = Raster<std::uint8_t>;
/// Mask raster holding 0 (background) or 1 (foreground).
using BinaryImage = Raster<std::uint8_t, BinaryTag>;
using FloatImage = Raster<float>;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};
using RgbImage = Raster<Rgb>;

inline long long count_foreground(const BinaryImage& img) {
  return std::count_if(img.pixels().begin(), img.pixels().end(), [](std::uint8_t v) { return v != 0; });
}

/// Foreground where intensity is strictly above `threshold`.
inline BinaryImage binarize(const GrayImage& img, int threshold) {
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > threshold ? 1 : 0;
  return out;
}

}  // namespace gate
