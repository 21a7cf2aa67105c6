#pragma once

// Multi-resolution tile pyramids. Level 0 is the full-resolution raster cut into 256-px
// tiles; each further level is a 2x2 box-filter downscale of the previous one, down to the
// first level whose longer side fits in one tile.
//
// The builder consumes the source one row at a time and keeps only one tile band (256 rows)
// per level, so a mosaic never has to be held in memory to be tiled.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gate/core/json.hpp"
#include "gate/imgcore/pnm.hpp"

namespace gate::session {

inline constexpr int kTileSize = 256;

struct LevelInfo {
  int width = 0;
  int height = 0;
  int cols = 0;
  int rows = 0;
  friend bool operator==(const LevelInfo&, const LevelInfo&) = default;
};

struct PyramidLayout {
  int width = 0;
  int height = 0;
  int tile = kTileSize;
  std::vector<LevelInfo> levels;

  static PyramidLayout for_size(int width, int height, int tile = kTileSize) {
    if (width < 1 || height < 1) throw Error(Errc::invalid_argument, "pyramid source must be nonempty");
    PyramidLayout l{width, height, tile, {}};
    int w = width, h = height;
    for (;;) {
      l.levels.push_back({w, h, (w + tile - 1) / tile, (h + tile - 1) / tile});
      if (std::max(w, h) <= tile) break;
      w = (w + 1) / 2;
      h = (h + 1) / 2;
    }
    return l;
  }

  int level_count() const { return static_cast<int>(levels.size()); }

  const LevelInfo& level(int n) const {
    if (n < 0 || n >= level_count()) throw Error(Errc::out_of_range, "pyramid level " + std::to_string(n) + " does not exist");
    return levels[static_cast<std::size_t>(n)];
  }

  /// Pixel rectangle covered by a tile; throws out_of_range for indices outside the grid.
  BBox tile_box(int n, int tx, int ty) const {
    const auto& L = level(n);
    if (tx < 0 || ty < 0 || tx >= L.cols || ty >= L.rows) {
      throw Error(Errc::out_of_range, "tile (" + std::to_string(tx) + ", " + std::to_string(ty) + ") outside level " +
                                          std::to_string(n) + " grid " + std::to_string(L.cols) + "x" +
                                          std::to_string(L.rows));
    }
    return {tx * tile, ty * tile, std::min(tile, L.width - tx * tile), std::min(tile, L.height - ty * tile)};
  }

  friend bool operator==(const PyramidLayout&, const PyramidLayout&) = default;
};

inline Json to_json(const PyramidLayout& l) {
  Json levels = Json::array();
  for (const auto& L : l.levels) levels.push_back({{"width", L.width}, {"height", L.height}, {"cols", L.cols}, {"rows", L.rows}});
  return {{"width", l.width}, {"height", l.height}, {"tile", l.tile}, {"levels", levels}};
}

inline PyramidLayout layout_from_json(const Json& j) {
  try {
    const auto l = PyramidLayout::for_size(j.at("width").get<int>(), j.at("height").get<int>(), j.at("tile").get<int>());
    if (j.at("levels").size() != l.levels.size()) throw Error(Errc::parse, "pyramid level count inconsistent with size");
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("pyramid layout: ") + e.what());
  }
}

namespace detail {

/// Rounded mean of n (1, 2 or 4) pixels; odd right/bottom edges average what is there.
inline std::uint8_t box_mean(const std::uint8_t* v, int n) {
  int s = 0;
  for (int i = 0; i < n; ++i) s += v[i];
  return static_cast<std::uint8_t>((s + n / 2) / n);
}

inline Rgb box_mean(const Rgb* v, int n) {
  int r = 0, g = 0, b = 0;
  for (int i = 0; i < n; ++i) r += v[i].r, g += v[i].g, b += v[i].b;
  return {static_cast<std::uint8_t>((r + n / 2) / n), static_cast<std::uint8_t>((g + n / 2) / n),
          static_cast<std::uint8_t>((b + n / 2) / n)};
}

/// One output row from one or two input rows.
template <typename P>
std::vector<P> downscale_rows(std::span<const P> a, std::span<const P> b) {
  const int w = static_cast<int>(a.size());
  std::vector<P> out(static_cast<std::size_t>((w + 1) / 2));
  P buf[4];
  for (int x = 0; x < static_cast<int>(out.size()); ++x) {
    int n = 0;
    for (int dx = 0; dx < 2 && 2 * x + dx < w; ++dx) {
      buf[n++] = a[static_cast<std::size_t>(2 * x + dx)];
      if (!b.empty()) buf[n++] = b[static_cast<std::size_t>(2 * x + dx)];
    }
    out[static_cast<std::size_t>(x)] = box_mean(buf, n);
  }
  return out;
}

}  // namespace detail

/// 2x box downscale of a whole raster, with the same edge handling as the pyramid.
template <typename P>
Raster<P> downscale2(const Raster<P>& img) {
  Raster<P> out((img.width() + 1) / 2, (img.height() + 1) / 2);
  for (int y = 0; y < out.height(); ++y) {
    const auto a = img.row(2 * y);
    const auto b = 2 * y + 1 < img.height() ? img.row(2 * y + 1) : std::span<const P>{};
    const auto r = detail::downscale_rows<P>(a, b);
    std::copy(r.begin(), r.end(), out.row(y).begin());
  }
  return out;
}

template <typename P>
class PyramidBuilder {
 public:
  using Tile = Raster<P>;
  using Sink = std::function<void(int level, int tx, int ty, const Tile& tile)>;

  PyramidBuilder(int width, int height, Sink sink) : layout_(PyramidLayout::for_size(width, height)), sink_(std::move(sink)) {
    for (const auto& L : layout_.levels) levels_.push_back({L, {}, 0, 0, {}});
  }

  const PyramidLayout& layout() const { return layout_; }

  void push_row(std::span<const P> row) {
    if (static_cast<int>(row.size()) != layout_.width) throw Error(Errc::invalid_argument, "row width does not match pyramid");
    if (levels_[0].next_row >= layout_.height) throw Error(Errc::invalid_argument, "more rows than the pyramid height");
    push(0, row);
  }

  /// Verifies every row arrived; all tiles have been emitted by then.
  void finish() const {
    for (const auto& l : levels_)
      if (l.next_row != l.info.height) throw Error(Errc::invalid_argument, "pyramid source ended early");
  }

 private:
  struct Level {
    LevelInfo info;
    std::vector<P> band;
    int band_rows = 0;
    int next_row = 0;
    std::vector<P> pending;  ///< even row waiting for its partner
  };

  void push(int n, std::span<const P> row) {
    auto& L = levels_[static_cast<std::size_t>(n)];
    L.band.insert(L.band.end(), row.begin(), row.end());
    ++L.band_rows;
    ++L.next_row;
    const bool last = L.next_row == L.info.height;
    if (L.band_rows == layout_.tile || last) flush(n);

    if (n + 1 < layout_.level_count()) {
      if (L.pending.empty() && !last) {
        L.pending.assign(row.begin(), row.end());
      } else if (L.pending.empty()) {
        push(n + 1, detail::downscale_rows<P>(row, {}));
      } else {
        const auto down = detail::downscale_rows<P>(L.pending, row);
        L.pending.clear();
        push(n + 1, down);
      }
    }
  }

  void flush(int n) {
    auto& L = levels_[static_cast<std::size_t>(n)];
    const int ty = (L.next_row - 1) / layout_.tile;
    for (int tx = 0; tx < L.info.cols; ++tx) {
      const int x0 = tx * layout_.tile;
      const int w = std::min(layout_.tile, L.info.width - x0);
      Tile t(w, L.band_rows);
      for (int y = 0; y < L.band_rows; ++y) {
        const auto src = L.band.begin() + static_cast<std::ptrdiff_t>(y) * L.info.width + x0;
        std::copy(src, src + w, t.row(y).begin());
      }
      sink_(n, tx, ty, t);
    }
    L.band.clear();
    L.band_rows = 0;
  }

  PyramidLayout layout_;
  Sink sink_;
  std::vector<Level> levels_;
};

/// In-memory pyramid, mostly for small rasters and tests.
template <typename P>
struct TilePyramid {
  PyramidLayout layout;
  std::vector<std::vector<Raster<P>>> tiles;  ///< per level, row-major (ty * cols + tx)

  const Raster<P>& tile(int level, int tx, int ty) const {
    layout.tile_box(level, tx, ty);
    const auto& L = layout.level(level);
    return tiles[static_cast<std::size_t>(level)][static_cast<std::size_t>(ty) * L.cols + tx];
  }

  Raster<P> assemble(int level) const {
    const auto& L = layout.level(level);
    Raster<P> out(L.width, L.height);
    for (int ty = 0; ty < L.rows; ++ty)
      for (int tx = 0; tx < L.cols; ++tx) out.paste(tile(level, tx, ty), tx * layout.tile, ty * layout.tile);
    return out;
  }
};

template <typename P>
TilePyramid<P> build_pyramid(const Raster<P>& img) {
  if (img.empty()) throw Error(Errc::invalid_argument, "cannot tile an empty raster");
  TilePyramid<P> p;
  PyramidBuilder<P> b(img.width(), img.height(), [&p](int n, int tx, int ty, const Raster<P>& t) {
    const auto& L = p.layout.level(n);
    p.tiles[static_cast<std::size_t>(n)][static_cast<std::size_t>(ty) * L.cols + tx] = t;
  });
  p.layout = b.layout();
  for (const auto& L : p.layout.levels) p.tiles.emplace_back(static_cast<std::size_t>(L.cols) * L.rows);
  for (int y = 0; y < img.height(); ++y) b.push_row(img.row(y));
  b.finish();
  return p;
}

// ---- on-disk layout: <dir>/pyramid.json and <dir>/<level>/<tx>_<ty>.pgm|.ppm ----

inline constexpr const char* kLayoutFile = "pyramid.json";

template <typename P>
constexpr const char* tile_extension() {
  if constexpr (std::is_same_v<P, Rgb>) return ".ppm";
  else return ".pgm";
}

inline std::filesystem::path tile_path(const std::filesystem::path& dir, int level, int tx, int ty, std::string_view ext) {
  return dir / std::to_string(level) / (std::to_string(tx) + "_" + std::to_string(ty) + std::string(ext));
}

template <typename P>
typename PyramidBuilder<P>::Sink directory_sink(const std::filesystem::path& dir) {
  return [dir](int n, int tx, int ty, const Raster<P>& t) {
    const auto path = tile_path(dir, n, tx, ty, tile_extension<P>());
    std::filesystem::create_directories(path.parent_path());
    if constexpr (std::is_same_v<P, Rgb>) pnm::write_ppm(path, t);
    else pnm::write_pgm(path, t);
  };
}

template <typename P>
PyramidLayout write_pyramid(const Raster<P>& img, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  PyramidBuilder<P> b(img.width(), img.height(), directory_sink<P>(dir));
  for (int y = 0; y < img.height(); ++y) b.push_row(img.row(y));
  b.finish();
  write_json(dir / kLayoutFile, to_json(b.layout()));
  return b.layout();
}

/// Tiles a binary PGM file row by row without loading it.
inline PyramidLayout write_pyramid_from_pgm(const std::filesystem::path& pgm, const std::filesystem::path& dir) {
  auto in = pnm::detail::open_in(pgm);
  const auto [w, h] = pnm::detail::read_header(in, "P5");
  std::filesystem::create_directories(dir);
  PyramidBuilder<std::uint8_t> b(w, h, directory_sink<std::uint8_t>(dir));
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), w);
    if (in.gcount() != w) throw Error(Errc::parse, "truncated PGM raster in " + pgm.string());
    b.push_row(row);
  }
  b.finish();
  write_json(dir / kLayoutFile, to_json(b.layout()));
  return b.layout();
}

/// Read access to a pyramid directory. Lookups open exactly one file.
class PyramidStore {
 public:
  explicit PyramidStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    const auto lf = dir_ / kLayoutFile;
    if (!std::filesystem::exists(lf)) throw Error(Errc::missing_artifact, "no pyramid at " + dir_.string());
    layout_ = layout_from_json(read_json(lf));
    ext_ = std::filesystem::exists(tile_path(dir_, 0, 0, 0, ".ppm")) ? ".ppm" : ".pgm";
  }

  const PyramidLayout& layout() const { return layout_; }
  bool color() const { return ext_ == ".ppm"; }
  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path path(int level, int tx, int ty) const {
    layout_.tile_box(level, tx, ty);
    return tile_path(dir_, level, tx, ty, ext_);
  }

  /// Encoded tile file (PGM or PPM) as stored.
  std::string bytes(int level, int tx, int ty) const {
    const auto p = path(level, tx, ty);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::missing_artifact, "missing tile " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  GrayImage gray_tile(int level, int tx, int ty) const {
    if (color()) throw Error(Errc::invalid_argument, "pyramid at " + dir_.string() + " holds color tiles");
    return pnm::read_pgm(path(level, tx, ty));
  }

  RgbImage color_tile(int level, int tx, int ty) const {
    if (!color()) throw Error(Errc::invalid_argument, "pyramid at " + dir_.string() + " holds gray tiles");
    return pnm::read_ppm(path(level, tx, ty));
  }

 private:
  std::filesystem::path dir_;
  PyramidLayout layout_;
  std::string ext_;
};

/// Parses "<tx>_<ty>" (an optional .pgm/.ppm suffix is ignored).
inline std::pair<int, int> parse_tile_name(std::string_view s) {
  if (const auto dot = s.find('.'); dot != std::string_view::npos) s = s.substr(0, dot);
  const auto us = s.find('_');
  auto whole = [](std::string_view t, int& v) {
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    return !t.empty() && r.ec == std::errc{} && r.ptr == t.data() + t.size();
  };
  int tx = -1, ty = -1;
  if (us == std::string_view::npos || !whole(s.substr(0, us), tx) || !whole(s.substr(us + 1), ty)) {
    throw Error(Errc::invalid_argument, "tile name must be <tx>_<ty>");
  }
  return {tx, ty};
}

}  // namespace gate::session
