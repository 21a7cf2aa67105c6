#pragma once

// On-disk session bundles.
//
//   <root>/<id>/session.siss                 manifest
//   <root>/<id>/frontal/<index>.pgm          frontal frames, 6-digit index
//   <root>/<id>/thermal/<side>.tmap          raw temperatures
//   <root>/<id>/mosaic/<role>.pgm            side mosaics
//   <root>/<id>/tiles/<role>/<level>/<tx>_<ty>.pgm|.ppm
//   <root>/<id>/detections/<kind>.json
//
// A bundle is written into a scratch directory and renamed into place, so a session either
// exists completely or not at all. Sessions are never modified after that.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "gate/session/manifest.hpp"
#include "gate/session/pyramid.hpp"
#include "gate/thermal/colorize.hpp"
#include "gate/thermal/io.hpp"

namespace gate::session {

namespace fs = std::filesystem;

struct StreamClock {
  std::int64_t start_time_us = 0;
  std::uint32_t rate_hz = 1;
  friend bool operator==(const StreamClock&, const StreamClock&) = default;
};

/// Everything a processed passage consists of, in memory.
struct SessionBundle {
  std::string id;
  std::int64_t created_us = 0;
  std::map<std::string, StreamClock> clocks;  ///< per role; roles without artifacts are ignored
  std::vector<GrayImage> frontal;
  std::optional<FloatImage> thermal_left;
  std::optional<FloatImage> thermal_right;
  std::optional<GrayImage> side_low;
  std::optional<GrayImage> side_high;
  std::map<std::string, Json> detections;

  friend bool operator==(const SessionBundle&, const SessionBundle&) = default;
};

inline std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.pgm", i);
  return buf;
}

/// Serialized form of a detection document. Fixed layout so bundles are byte-stable.
inline std::string detection_text(const Json& doc) { return doc.dump(2) + "\n"; }

namespace detail {

inline void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + p.string());
  out << s;
  if (!out) throw Error(Errc::io, "failed writing " + p.string());
}

inline StreamClock clock_for(const SessionBundle& b, const std::string& role) {
  const auto it = b.clocks.find(role);
  if (it == b.clocks.end()) throw Error(Errc::missing_artifact, "no stream timing for role '" + role + "'");
  if (it->second.rate_hz == 0) throw Error(Errc::invalid_argument, "stream '" + role + "' has a zero rate");
  return it->second;
}

}  // namespace detail

/// Writes `b` as <root>/<id> and returns its manifest. Fails if the session already exists.
inline SessionManifest save_session(const fs::path& root, const SessionBundle& b) {
  SessionManifest m;
  m.id = b.id;
  m.created_us = b.created_us;
  {
    SessionManifest probe = m;
    probe.validate();
  }
  const fs::path final_dir = root / b.id;
  if (fs::exists(final_dir)) throw Error(Errc::conflict, "session " + b.id + " already exists under " + root.string());
  const fs::path dir = root / ("." + b.id + ".partial");
  fs::remove_all(dir);
  fs::create_directories(dir);

  try {
    if (!b.frontal.empty()) {
      const auto c = detail::clock_for(b, "frontal");
      fs::create_directories(dir / "frontal");
      for (std::size_t i = 0; i < b.frontal.size(); ++i) {
        if (b.frontal[i].width() != b.frontal[0].width() || b.frontal[i].height() != b.frontal[0].height()) {
          throw Error(Errc::invalid_argument, "frontal frames differ in size");
        }
        pnm::write_pgm(dir / "frontal" / frame_name(i), b.frontal[i]);
      }
      m.streams.push_back({"frontal", c.start_time_us, c.rate_hz, b.frontal[0].width(), b.frontal[0].height(),
                           static_cast<std::int64_t>(b.frontal.size()), "frontal", std::nullopt});
    }
    for (const auto& [role, img] : {std::pair{std::string("thermal-left"), &b.thermal_left},
                                    std::pair{std::string("thermal-right"), &b.thermal_right}}) {
      if (!*img) continue;
      const auto c = detail::clock_for(b, role);
      const std::string side = role.substr(8);
      fs::create_directories(dir / "thermal");
      thermal::write_tmap(dir / "thermal" / (side + ".tmap"), **img);
      const std::string pyr = "tiles/" + role;
      thermal::ThermalMosaic tm;
      tm.temps = **img;
      write_pyramid(thermal::colorize(tm), dir / pyr);
      m.streams.push_back({role, c.start_time_us, c.rate_hz, (*img)->width(), (*img)->height(), (*img)->width(),
                           "thermal/" + side + ".tmap", pyr});
    }
    for (const auto& [role, img] : {std::pair{std::string("side-low"), &b.side_low},
                                    std::pair{std::string("side-high"), &b.side_high}}) {
      if (!*img) continue;
      const auto c = detail::clock_for(b, role);
      fs::create_directories(dir / "mosaic");
      pnm::write_pgm(dir / "mosaic" / (role + ".pgm"), **img);
      const std::string pyr = "tiles/" + role;
      write_pyramid(**img, dir / pyr);
      m.streams.push_back({role, c.start_time_us, c.rate_hz, (*img)->width(), (*img)->height(), (*img)->width(),
                           "mosaic/" + role + ".pgm", pyr});
    }
    if (!b.detections.empty()) fs::create_directories(dir / "detections");
    for (const auto& [kind, doc] : b.detections) {
      const std::string rel = "detections/" + kind + ".json";
      detail::write_text(dir / rel, detection_text(doc));
      m.detections[kind] = rel;
    }
    m.validate();
    detail::write_text(dir / kManifestFile, to_json(m).dump(2) + "\n");
    fs::rename(dir, final_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  return m;
}

/// Reads and validates a manifest, including existence of every referenced artifact.
inline SessionManifest load_manifest(const fs::path& session_dir) {
  const fs::path mf = session_dir / kManifestFile;
  if (!fs::exists(mf)) throw Error(Errc::missing_artifact, "no session manifest at " + mf.string());
  auto m = manifest_from_json(read_json(mf));
  auto need = [&](const std::string& rel) {
    if (!fs::exists(session_dir / rel)) throw Error(Errc::missing_artifact, "session " + m.id + " references missing " + rel);
  };
  for (const auto& s : m.streams) {
    need(s.path);
    if (s.pyramid) need(*s.pyramid + "/" + kLayoutFile);
    if (s.role == "frontal") {
      for (std::int64_t i = 0; i < s.count; ++i) need(s.path + "/" + frame_name(static_cast<std::size_t>(i)));
    }
  }
  for (const auto& [k, rel] : m.detections) need(rel);
  return m;
}

inline fs::path session_dir(const fs::path& root, const std::string& id) {
  SessionManifest probe;
  probe.id = id;
  probe.validate();
  return root / id;
}

inline SessionManifest load_session(const fs::path& root, const std::string& id) {
  const auto dir = session_dir(root, id);
  if (!fs::is_directory(dir)) throw Error(Errc::not_found, "no session " + id + " under " + root.string());
  auto m = load_manifest(dir);
  if (m.id != id) throw Error(Errc::parse, "manifest in " + dir.string() + " names session " + m.id);
  return m;
}

/// Loads the manifest plus every raster and document.
inline SessionBundle load_bundle(const fs::path& root, const std::string& id) {
  const auto m = load_session(root, id);
  const auto dir = root / id;
  SessionBundle b;
  b.id = m.id;
  b.created_us = m.created_us;
  for (const auto& s : m.streams) {
    b.clocks[s.role] = {s.start_time_us, s.rate_hz};
    if (s.role == "frontal") {
      for (std::int64_t i = 0; i < s.count; ++i) b.frontal.push_back(pnm::read_pgm(dir / s.path / frame_name(static_cast<std::size_t>(i))));
    } else if (s.role == "thermal-left") {
      b.thermal_left = thermal::read_tmap(dir / s.path);
    } else if (s.role == "thermal-right") {
      b.thermal_right = thermal::read_tmap(dir / s.path);
    } else if (s.role == "side-low") {
      b.side_low = pnm::read_pgm(dir / s.path);
    } else if (s.role == "side-high") {
      b.side_high = pnm::read_pgm(dir / s.path);
    }
  }
  for (const auto& [k, rel] : m.detections) b.detections[k] = read_json(dir / rel);
  return b;
}

/// All sessions under `root`, ordered by creation time (then id). Directories without a
/// readable manifest are skipped.
inline std::vector<SessionManifest> list_sessions(const fs::path& root) {
  std::vector<SessionManifest> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (!e.is_directory() || e.path().filename().string().starts_with(".")) continue;
    try {
      out.push_back(load_manifest(e.path()));
    } catch (const Error&) {
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.created_us != b.created_us ? a.created_us < b.created_us : a.id < b.id;
  });
  return out;
}

}  // namespace gate::session
