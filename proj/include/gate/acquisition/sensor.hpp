#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gate/core/json.hpp"

namespace gate::acquisition {

enum class SensorKind { matrix_visual, line_visual, line_thermal };

inline const char* to_string(SensorKind k) {
  switch (k) {
    case SensorKind::matrix_visual: return "matrix-visual";
    case SensorKind::line_visual: return "line-visual";
    case SensorKind::line_thermal: return "line-thermal";
  }
  return "unknown";
}

inline SensorKind parse_kind(const std::string& s) {
  if (s == "matrix-visual") return SensorKind::matrix_visual;
  if (s == "line-visual") return SensorKind::line_visual;
  if (s == "line-thermal") return SensorKind::line_thermal;
  throw Error(Errc::invalid_argument, "unknown sensor kind: " + s);
}

/// Camera-model specific primitives a kind may declare.
inline std::vector<std::string> supported_primitives(SensorKind k) {
  switch (k) {
    case SensorKind::line_thermal: return {"focus"};
    case SensorKind::line_visual: return {"exposure"};
    case SensorKind::matrix_visual: return {};
  }
  return {};
}

/// Wire size of a sample is payload (w*h*bytes_per_pixel) plus fixed per-sample framing.
struct SensorDescriptor {
  std::string id;
  SensorKind kind = SensorKind::matrix_visual;
  std::uint32_t rate_hz = 1;
  int width = 1;
  int height = 1;
  int bytes_per_pixel = 1;
  int framing_bytes = 0;

  std::uint64_t payload_bytes_per_sample() const {
    return static_cast<std::uint64_t>(width) * height * bytes_per_pixel;
  }
  std::uint64_t wire_bytes_per_sample() const { return payload_bytes_per_sample() + framing_bytes; }
  /// Effective bytes per pixel on the wire.
  double bytes_per_sample() const { return static_cast<double>(wire_bytes_per_sample()) / (double(width) * height); }
  double declared_rate_Bps() const { return static_cast<double>(rate_hz) * wire_bytes_per_sample(); }

  void validate() const {
    if (id.empty()) throw Error(Errc::invalid_argument, "sensor id must be nonempty");
    if (rate_hz < 1 || width < 1 || height < 1 || bytes_per_pixel < 1 || framing_bytes < 0)
      throw Error(Errc::invalid_argument, "sensor descriptor has non-positive geometry or rate");
  }
};

/// Nominal data rates of the reference installation (MB decimal, KB binary).
inline constexpr double kMatrixNominalBps = 92e6;
inline constexpr double kLineNominalBps = 80e6;
inline constexpr double kThermalNominalBps = 128.0 * 1024;
inline constexpr double kDiskBudgetBps = 270e6;

inline double nominal_rate_Bps(SensorKind k) {
  switch (k) {
    case SensorKind::matrix_visual: return kMatrixNominalBps;
    case SensorKind::line_visual: return kLineNominalBps;
    case SensorKind::line_thermal: return kThermalNominalBps;
  }
  return 0;
}

inline SensorDescriptor matrix_camera(std::string id) {
  return {std::move(id), SensorKind::matrix_visual, 300, 640, 480, 1, 0};
}
inline SensorDescriptor line_camera(std::string id) {
  // 4096 payload bytes plus 228 bytes of line header/trailer: 4324 B/line, ~1.06 B/px.
  return {std::move(id), SensorKind::line_visual, 18500, 4096, 1, 1, 228};
}
inline SensorDescriptor thermal_camera(std::string id) {
  return {std::move(id), SensorKind::line_thermal, 512, 256, 1, 1, 0};
}

/// The five-sensor portal: one frontal matrix camera, two line-scan cameras (lower and
/// upper/roof) and two thermal line cameras (left and right).
inline std::vector<SensorDescriptor> reference_fleet() {
  return {matrix_camera("frontal"), line_camera("side-low"), line_camera("side-high"), thermal_camera("thermal-left"),
          thermal_camera("thermal-right")};
}

inline Json to_json(const SensorDescriptor& d) {
  return {{"id", d.id},
          {"kind", to_string(d.kind)},
          {"rate_hz", d.rate_hz},
          {"width", d.width},
          {"height", d.height},
          {"bytes_per_pixel", d.bytes_per_pixel},
          {"framing_bytes", d.framing_bytes},
          {"declared_rate_Bps", d.declared_rate_Bps()}};
}

inline SensorDescriptor descriptor_from_json(const Json& j) {
  try {
    SensorDescriptor d;
    d.id = j.at("id").get<std::string>();
    d.kind = parse_kind(j.at("kind").get<std::string>());
    d.rate_hz = j.at("rate_hz").get<std::uint32_t>();
    d.width = j.at("width").get<int>();
    d.height = j.at("height").get<int>();
    d.bytes_per_pixel = j.value("bytes_per_pixel", 1);
    d.framing_bytes = j.value("framing_bytes", 0);
    d.validate();
    return d;
  } catch (const Json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("bad sensor descriptor: ") + e.what());
  }
}

}  // namespace gate::acquisition
