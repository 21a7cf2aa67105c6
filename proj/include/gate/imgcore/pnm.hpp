#pragma once

// Binary PGM (P5) and PPM (P6) raster I/O, 8-bit only.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gate/imgcore/image.hpp"

namespace gate::pnm {

namespace detail {

inline int read_header_int(std::istream& in) {
  int c = in.peek();
  while (in && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else {
      in.get();
    }
    c = in.peek();
  }
  int value = -1;
  if (!(in >> value)) throw Error(Errc::parse, "malformed PNM header");
  return value;
}

struct Header {
  int width;
  int height;
};

inline Header read_header(std::istream& in, std::string_view magic) {
  char m[2] = {0, 0};
  in.read(m, 2);
  if (!in || m[0] != magic[0] || m[1] != magic[1]) {
    throw Error(Errc::parse, "expected PNM magic " + std::string(magic));
  }
  const int w = read_header_int(in);
  const int h = read_header_int(in);
  const int maxval = read_header_int(in);
  if (w < 1 || h < 1) throw Error(Errc::parse, "PNM dimensions must be positive");
  if (maxval != 255) throw Error(Errc::parse, "only 8-bit PNM (maxval 255) is supported");
  in.get();  // single whitespace before raster
  return {w, h};
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  return out;
}

}  // namespace detail

inline GrayImage read_pgm(std::istream& in) {
  const auto [w, h] = detail::read_header(in, "P5");
  GrayImage img(w, h);
  in.read(reinterpret_cast<char*>(img.storage().data()), static_cast<std::streamsize>(img.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.size())) throw Error(Errc::parse, "truncated PGM raster");
  return img;
}

inline void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.storage().data()), static_cast<std::streamsize>(img.size()));
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_pgm(in);
}

inline void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  auto out = detail::open_out(path);
  write_pgm(out, img);
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

/// Masks are stored as PGM with 0 / 255.
inline void write_mask(const std::filesystem::path& path, const BinaryImage& mask) {
  GrayImage g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) g.pixels()[i] = mask.pixels()[i] ? 255 : 0;
  write_pgm(path, g);
}

inline BinaryImage read_mask(const std::filesystem::path& path) {
  const GrayImage g = read_pgm(path);
  BinaryImage m(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = g.pixels()[i];
    if (v != 0 && v != 255) throw Error(Errc::parse, "mask PGM must only contain 0 and 255");
    m.pixels()[i] = v ? 1 : 0;
  }
  return m;
}

inline void write_ppm(std::ostream& out, const RgbImage& img) {
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  static_assert(sizeof(Rgb) == 3);
  out.write(reinterpret_cast<const char*>(img.storage().data()), static_cast<std::streamsize>(img.size() * 3));
}

inline void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  auto out = detail::open_out(path);
  write_ppm(out, img);
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

inline RgbImage read_ppm(std::istream& in) {
  const auto [w, h] = detail::read_header(in, "P6");
  RgbImage img(w, h);
  in.read(reinterpret_cast<char*>(img.storage().data()), static_cast<std::streamsize>(img.size() * 3));
  if (in.gcount() != static_cast<std::streamsize>(img.size() * 3)) throw Error(Errc::parse, "truncated PPM raster");
  return img;
}

inline RgbImage read_ppm(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_ppm(in);
}

inline std::string encode_pgm(const GrayImage& img) {
  std::ostringstream out;
  write_pgm(out, img);
  return std::move(out).str();
}

inline std::string encode_ppm(const RgbImage& img) {
  std::ostringstream out;
  write_ppm(out, img);
  return std::move(out).str();
}

}  // namespace gate::pnm
