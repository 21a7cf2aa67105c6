#pragma once

// .tmap:   "TMAP1\n<width> <height>\n" then width*height little-endian float32, row-major.
// .tlines: "TLINES1\n<count> 256\n" then per line an int64 LE timestamp (µs) and 256 float32 LE.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gate/core/binio.hpp"
#include "gate/thermal/mosaic.hpp"

namespace gate::thermal {

namespace detail {

using binio::get_le;
using binio::put_le;

inline void expect_magic(std::istream& in, const std::string& magic) {
  std::string line;
  if (!std::getline(in, line) || line != magic) throw Error(Errc::parse, "bad magic, expected " + magic);
}

inline std::pair<long long, long long> read_dims(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse, "missing dimension line");
  std::istringstream ss(line);
  long long a = 0, b = 0;
  if (!(ss >> a >> b) || a < 1 || b < 1) throw Error(Errc::parse, "bad dimension line: " + line);
  return {a, b};
}

}  // namespace detail

inline void write_tmap(std::ostream& out, const FloatImage& temps) {
  out << "TMAP1\n" << temps.width() << ' ' << temps.height() << '\n';
  for (float v : temps.pixels()) detail::put_le(out, v);
  if (!out) throw Error(Errc::io, "failed writing .tmap");
}

inline FloatImage read_tmap(std::istream& in) {
  detail::expect_magic(in, "TMAP1");
  const auto [w, h] = detail::read_dims(in);
  if (w > (1 << 24) || h > (1 << 24)) throw Error(Errc::parse, ".tmap dimensions too large");
  FloatImage img(static_cast<int>(w), static_cast<int>(h));
  for (float& v : img.pixels()) v = detail::get_le<float>(in);
  return img;
}

inline std::string encode_tmap(const FloatImage& temps) {
  std::ostringstream out(std::ios::binary);
  write_tmap(out, temps);
  return out.str();
}

inline void write_tmap(const std::filesystem::path& path, const FloatImage& temps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  write_tmap(out, temps);
}

inline FloatImage read_tmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + path.string());
  return read_tmap(in);
}

inline void write_tlines(std::ostream& out, std::span<const ThermalLine> lines) {
  out << "TLINES1\n" << lines.size() << ' ' << kLineSamples << '\n';
  for (const auto& l : lines) {
    detail::put_le<std::int64_t>(out, l.timestamp_us);
    for (float v : l.samples) detail::put_le(out, v);
  }
  if (!out) throw Error(Errc::io, "failed writing .tlines");
}

inline std::vector<ThermalLine> read_tlines(std::istream& in) {
  detail::expect_magic(in, "TLINES1");
  const auto [n, samples] = detail::read_dims(in);
  if (samples != kLineSamples) throw Error(Errc::parse, ".tlines must carry 256 samples per line");
  if (n > (1 << 24)) throw Error(Errc::parse, ".tlines line count too large");
  std::vector<ThermalLine> lines(static_cast<std::size_t>(n));
  for (auto& l : lines) {
    l.timestamp_us = detail::get_le<std::int64_t>(in);
    for (float& v : l.samples) v = detail::get_le<float>(in);
  }
  return lines;
}

inline void write_tlines(const std::filesystem::path& path, std::span<const ThermalLine> lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  write_tlines(out, lines);
}

inline std::vector<ThermalLine> read_tlines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + path.string());
  return read_tlines(in);
}

}  // namespace gate::thermal
