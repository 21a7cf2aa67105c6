#pragma once

// Session manifest (format tag "SISS1") and the time-to-position sync model.
//
// Times are integer microseconds and rates integer hertz, so a marker position is exact
// integer arithmetic that any client can reproduce: floor((t - start) * rate / 1e6).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gate/core/json.hpp"

namespace gate::session {

inline constexpr const char* kManifestFormat = "SISS1";
inline constexpr const char* kManifestFile = "session.siss";

inline constexpr std::array<const char*, 5> kRoles = {"frontal", "thermal-left", "thermal-right", "side-low", "side-high"};

inline bool valid_role(std::string_view r) {
  return std::find(kRoles.begin(), kRoles.end(), r) != kRoles.end();
}

/// Artifact paths must stay inside the session directory.
inline bool safe_relative(std::string_view p) {
  if (p.empty() || p.front() == '/' || p.find('\\') != std::string_view::npos) return false;
  std::size_t start = 0;
  while (start <= p.size()) {
    const auto end = std::min(p.find('/', start), p.size());
    const auto part = p.substr(start, end - start);
    if (part.empty() || part == "..") return false;
    start = end + 1;
  }
  return true;
}

struct StreamEntry {
  std::string role;
  std::int64_t start_time_us = 0;
  std::uint32_t rate_hz = 0;
  int width = 0;   ///< frame width, or mosaic length along the passage
  int height = 0;
  std::int64_t count = 0;  ///< frames (frontal) or lines/columns (mosaics)
  std::string path;        ///< relative to the session directory
  std::optional<std::string> pyramid;
  friend bool operator==(const StreamEntry&, const StreamEntry&) = default;
};

// ---- sync ----

struct StreamTiming {
  std::int64_t start_time_us = 0;
  std::uint32_t rate_hz = 1;
  std::int64_t extent = 1;  ///< number of addressable positions
};

struct SyncModel {
  std::map<std::string, StreamTiming> streams;
};

/// Column or frame index of `role` at absolute time t_us, clamped to the stream extent.
/// Times before the stream start map to index 0.
inline std::int64_t time_to_position_us(const SyncModel& sync, const std::string& role, std::int64_t t_us) {
  const auto it = sync.streams.find(role);
  if (it == sync.streams.end()) throw Error(Errc::not_found, "no stream with role '" + role + "'");
  const auto& s = it->second;
  if (s.rate_hz == 0) throw Error(Errc::invalid_argument, "stream rate must be positive");
  const std::int64_t dt = t_us - s.start_time_us;
  if (dt <= 0) return 0;
  const std::int64_t idx = dt * static_cast<std::int64_t>(s.rate_hz) / 1'000'000;
  return std::min(idx, std::max<std::int64_t>(s.extent - 1, 0));
}

inline std::int64_t seconds_to_us(double t) { return std::llround(t * 1e6); }

inline std::int64_t time_to_position(const SyncModel& sync, const std::string& role, double t_seconds) {
  return time_to_position_us(sync, role, seconds_to_us(t_seconds));
}

// ---- manifest ----

struct SessionManifest {
  std::string id;
  std::int64_t created_us = 0;
  std::vector<StreamEntry> streams;
  std::map<std::string, std::string> detections;  ///< kind -> relative path

  const StreamEntry* stream(std::string_view role) const {
    for (const auto& s : streams)
      if (s.role == role) return &s;
    return nullptr;
  }

  SyncModel sync() const {
    SyncModel m;
    for (const auto& s : streams) m.streams[s.role] = {s.start_time_us, s.rate_hz, s.count};
    return m;
  }

  /// Passage span covered by all streams, in microseconds.
  std::pair<std::int64_t, std::int64_t> time_span_us() const {
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& s : streams) {
      lo = std::min(lo, s.start_time_us);
      hi = std::max(hi, s.start_time_us + s.count * 1'000'000 / std::max<std::uint32_t>(s.rate_hz, 1));
    }
    if (streams.empty()) return {0, 0};
    return {lo, hi};
  }

  /// Structural invariants (no file-system access).
  void validate() const {
    if (id.empty() || id.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") != std::string::npos ||
        id == "." || id == "..") {
      throw Error(Errc::parse, "session id '" + id + "' is not a plain name");
    }
    std::vector<std::string> seen;
    for (const auto& s : streams) {
      if (!valid_role(s.role)) throw Error(Errc::parse, "unknown stream role '" + s.role + "'");
      if (std::find(seen.begin(), seen.end(), s.role) != seen.end()) {
        throw Error(Errc::parse, "more than one stream with role '" + s.role + "'");
      }
      seen.push_back(s.role);
      if (s.rate_hz == 0) throw Error(Errc::parse, "stream '" + s.role + "' has a zero rate");
      if (s.width < 1 || s.height < 1 || s.count < 1) throw Error(Errc::parse, "stream '" + s.role + "' is empty");
      if (!safe_relative(s.path)) throw Error(Errc::parse, "stream '" + s.role + "' path '" + s.path + "' is not relative");
      if (s.pyramid && !safe_relative(*s.pyramid)) throw Error(Errc::parse, "stream '" + s.role + "' pyramid path is not relative");
    }
    for (const auto& [k, v] : detections)
      if (!safe_relative(v)) throw Error(Errc::parse, "detection '" + k + "' path '" + v + "' is not relative");
  }

  friend bool operator==(const SessionManifest&, const SessionManifest&) = default;
};

inline Json to_json(const StreamEntry& s) {
  Json j = {{"role", s.role},   {"start_time_us", s.start_time_us}, {"rate_hz", s.rate_hz}, {"width", s.width},
            {"height", s.height}, {"count", s.count},                 {"path", s.path}};
  j["pyramid"] = s.pyramid ? Json(*s.pyramid) : Json(nullptr);
  return j;
}

inline Json to_json(const SessionManifest& m) {
  Json streams = Json::array();
  for (const auto& s : m.streams) streams.push_back(to_json(s));
  Json det = Json::object();
  for (const auto& [k, v] : m.detections) det[k] = v;
  return {{"format", kManifestFormat}, {"id", m.id}, {"created_us", m.created_us}, {"streams", streams}, {"detections", det}};
}

inline SessionManifest manifest_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("format")) throw Error(Errc::parse, "manifest has no format field");
  if (j["format"] != kManifestFormat) {
    throw Error(Errc::version_mismatch, "manifest format " + j["format"].dump() + ", expected " + kManifestFormat);
  }
  try {
    SessionManifest m;
    m.id = j.at("id").get<std::string>();
    m.created_us = j.at("created_us").get<std::int64_t>();
    for (const auto& s : j.at("streams")) {
      StreamEntry e;
      e.role = s.at("role").get<std::string>();
      e.start_time_us = s.at("start_time_us").get<std::int64_t>();
      e.rate_hz = s.at("rate_hz").get<std::uint32_t>();
      e.width = s.at("width").get<int>();
      e.height = s.at("height").get<int>();
      e.count = s.at("count").get<std::int64_t>();
      e.path = s.at("path").get<std::string>();
      if (s.contains("pyramid") && !s["pyramid"].is_null()) e.pyramid = s["pyramid"].get<std::string>();
      m.streams.push_back(std::move(e));
    }
    for (const auto& [k, v] : j.at("detections").items()) m.detections[k] = v.get<std::string>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace gate::session
