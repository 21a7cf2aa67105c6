#pragma once

// PGFM1 template model, all fields little-endian:
//   "PGFM1"                          5 bytes
//   u32 template_w, u32 template_h
//   u32 count, u32 dim (= 128)
//   keypoint table: count x { f32 x, f32 y, f32 scale, f32 orientation, f32 response, i32 octave }
//   descriptor table: count x dim f32
// A model-set file is one or more such records back to back.

#include <filesystem>
#include <fstream>

#include "gate/pantograph/detect.hpp"
#include "gate/core/binio.hpp"

namespace gate::pantograph {

inline void write_model(std::ostream& out, const FeatureModel& m) {
  using binio::put_le;
  out.write("PGFM1", 5);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.template_w));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.template_h));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.keypoints.size()));
  put_le<std::uint32_t>(out, kDescriptorSize);
  for (const auto& k : m.keypoints) {
    put_le(out, k.x);
    put_le(out, k.y);
    put_le(out, k.scale);
    put_le(out, k.orientation);
    put_le(out, k.response);
    put_le<std::int32_t>(out, k.octave);
  }
  for (const auto& d : m.descriptors())
    for (float v : d) put_le(out, v);
  if (!out) throw Error(Errc::io, "failed writing model");
}

inline FeatureModel read_model(std::istream& in) {
  using binio::get_le;
  char magic[5];
  if (!in.read(magic, 5) || std::string(magic, 5) != "PGFM1") throw Error(Errc::parse, "not a PGFM1 model");
  const auto w = get_le<std::uint32_t>(in);
  const auto h = get_le<std::uint32_t>(in);
  const auto n = get_le<std::uint32_t>(in);
  const auto dim = get_le<std::uint32_t>(in);
  if (dim != kDescriptorSize) throw Error(Errc::version_mismatch, "descriptor dimension must be 128");
  if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20) || n > (1u << 24)) throw Error(Errc::parse, "implausible model header");
  std::vector<Keypoint> kps(n);
  for (auto& k : kps) {
    k.x = get_le<float>(in);
    k.y = get_le<float>(in);
    k.scale = get_le<float>(in);
    k.orientation = get_le<float>(in);
    k.response = get_le<float>(in);
    k.octave = get_le<std::int32_t>(in);
  }
  std::vector<Descriptor> desc(n);
  for (auto& d : desc)
    for (float& v : d) v = get_le<float>(in);
  return make_model(static_cast<int>(w), static_cast<int>(h), std::move(kps), std::move(desc));
}

inline void write_models(const std::filesystem::path& path, std::span<const FeatureModel> models) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  for (const auto& m : models) write_model(out, m);
}

/// Every record of a model-set file (a single-model file gives a set of one).
inline std::vector<FeatureModel> read_models(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + path.string());
  std::vector<FeatureModel> out;
  do out.push_back(read_model(in));
  while (in.peek() != std::char_traits<char>::eof());
  return out;
}

inline void write_model(const std::filesystem::path& path, const FeatureModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  write_model(out, m);
}

inline FeatureModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + path.string());
  return read_model(in);
}

}  // namespace gate::pantograph
