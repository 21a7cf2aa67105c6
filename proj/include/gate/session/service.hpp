#pragma once

// Read-only HTTP access to the sessions under one root directory. Sessions are immutable,
// so handlers share nothing mutable and need no locking.

#include <filesystem>

#include "gate/core/http.hpp"
#include "gate/session/store.hpp"

namespace gate::session {

inline Json summary_json(const SessionManifest& m) {
  Json roles = Json::array();
  for (const auto& s : m.streams) roles.push_back(s.role);
  const auto [t0, t1] = m.time_span_us();
  return {{"id", m.id}, {"created_us", m.created_us}, {"roles", roles}, {"start_us", t0}, {"end_us", t1}};
}

inline const StreamEntry& require_stream(const SessionManifest& m, const std::string& role) {
  const auto* s = m.stream(role);
  if (!s) throw Error(Errc::not_found, "session " + m.id + " has no stream '" + role + "'");
  return *s;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline int parse_int(const std::string& s, const char* what) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw Error(Errc::invalid_argument, std::string(what) + " must be an integer, got '" + s + "'");
  }
  return v;
}

/// GET /sessions
/// GET /sessions/{id}/manifest
/// GET /sessions/{id}/tiles/{role}/{level}/{tx}_{ty}      PGM (mosaics) or PPM (thermal previews)
/// GET /sessions/{id}/pyramid/{role}                      tile grid per level
/// GET /sessions/{id}/thermal/{side}/raw                  .tmap
/// GET /sessions/{id}/frontal/{index}                     PGM frame
/// GET /sessions/{id}/detections                          all detection documents
/// GET /sessions/{id}/position/{role}?t=<seconds>         time-to-position
inline void mount_sessions(httplib::Server& srv, std::filesystem::path root) {
  using namespace gate::http;
  using httplib::Request, httplib::Response;
  auto load = [root](const Request& req) { return load_session(root, req.matches[1]); };

  srv.Get("/sessions", guarded([root](const Request&, Response& res) {
    Json out = Json::array();
    for (const auto& m : list_sessions(root)) out.push_back(summary_json(m));
    send_json(res, out);
  }));
  srv.Get(R"(/sessions/([^/]+)/manifest)", guarded([load](const Request& req, Response& res) {
    send_json(res, to_json(load(req)));
  }));
  srv.Get(R"(/sessions/([^/]+)/tiles/([^/]+)/([^/]+)/([^/]+))", guarded([load, root](const Request& req, Response& res) {
    const auto m = load(req);
    const auto& s = require_stream(m, req.matches[2]);
    if (!s.pyramid) throw Error(Errc::not_found, "stream '" + s.role + "' has no tile pyramid");
    const PyramidStore store(root / m.id / *s.pyramid);
    const int level = parse_int(req.matches[3], "level");
    const auto [tx, ty] = parse_tile_name(req.matches[4].str());
    res.set_content(store.bytes(level, tx, ty), store.color() ? "image/x-portable-pixmap" : "image/x-portable-graymap");
  }));
  srv.Get(R"(/sessions/([^/]+)/pyramid/([^/]+))", guarded([load, root](const Request& req, Response& res) {
    const auto m = load(req);
    const auto& s = require_stream(m, req.matches[2]);
    if (!s.pyramid) throw Error(Errc::not_found, "stream '" + s.role + "' has no tile pyramid");
    const PyramidStore store(root / m.id / *s.pyramid);
    Json j = to_json(store.layout());
    j["format"] = store.color() ? "ppm" : "pgm";
    send_json(res, j);
  }));
  srv.Get(R"(/sessions/([^/]+)/thermal/([^/]+)/raw)", guarded([load, root](const Request& req, Response& res) {
    const auto m = load(req);
    const std::string side = req.matches[2];
    if (side != "left" && side != "right") throw Error(Errc::invalid_argument, "thermal side must be left or right");
    const auto& s = require_stream(m, "thermal-" + side);
    res.set_content(read_file(root / m.id / s.path), "application/octet-stream");
  }));
  srv.Get(R"(/sessions/([^/]+)/frontal/([^/]+))", guarded([load, root](const Request& req, Response& res) {
    const auto m = load(req);
    const auto& s = require_stream(m, "frontal");
    const int i = parse_int(req.matches[2], "frame index");
    if (i < 0 || i >= s.count) throw Error(Errc::out_of_range, "frame " + std::to_string(i) + " outside the stream");
    res.set_content(read_file(root / m.id / s.path / frame_name(static_cast<std::size_t>(i))), "image/x-portable-graymap");
  }));
  srv.Get(R"(/sessions/([^/]+)/detections)", guarded([load, root](const Request& req, Response& res) {
    const auto m = load(req);
    Json out = Json::object();
    for (const auto& [kind, rel] : m.detections) out[kind] = read_json(root / m.id / rel);
    send_json(res, out);
  }));
  srv.Get(R"(/sessions/([^/]+)/position/([^/]+))", guarded([load](const Request& req, Response& res) {
    const auto m = load(req);
    const std::string role = req.matches[2];
    if (!req.has_param("t")) throw Error(Errc::invalid_argument, "query parameter t (seconds) is required");
    double t = 0;
    try {
      t = std::stod(req.get_param_value("t"));
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "t must be a number of seconds");
    }
    send_json(res, {{"role", role}, {"t_us", seconds_to_us(t)}, {"index", time_to_position(m.sync(), role, t)}});
  }));
}

}  // namespace gate::session
