#pragma once

// HTTP front of the AcquisitionManager (plus the sensor-side endpoint and an HTTP forwarder).
//   POST   /register                     {descriptor, endpoint, specific_primitives} -> 201 {token}
//   POST   /heartbeat                    {token, state, bytes_written?, session?}
//   GET    /fleet
//   POST   /primitive                    {command: start|stop|pause}     409 when refused
//   POST   /sensor/{id}/primitive/{name} args                            404 unknown, 409 undeclared
//   DELETE /register/{token}                                             401 unknown token
//   GET    /                             human-readable fleet status page

#include <sstream>

#include "gate/acquisition/manager.hpp"
#include "gate/acquisition/simulate.hpp"
#include "gate/core/http.hpp"

namespace gate::acquisition {

inline Json to_json(const FleetView& f) {
  Json sensors = Json::array();
  for (const auto& s : f.sensors) {
    sensors.push_back({{"descriptor", to_json(s.reg.descriptor)},
                       {"endpoint", s.reg.endpoint},
                       {"specific_primitives", s.reg.specific_primitives},
                       {"state", to_string(s.state)},
                       {"last_heartbeat_us", s.last_heartbeat_us},
                       {"bytes_written", s.bytes_written},
                       {"session", s.session ? Json(*s.session) : Json(nullptr)},
                       {"stale", s.stale}});
  }
  return {{"at_us", f.at_us}, {"sensors", sensors}};
}

inline Json to_json(const BroadcastOutcome& o) {
  Json j = {{"command", to_string(o.command)}, {"accepted", o.accepted}};
  if (!o.accepted) {
    j["reason"] = o.reason;
    j["blockers"] = o.blockers;
  }
  if (o.session) j["session"] = *o.session;
  j["per_sensor"] = o.per_sensor;
  return j;
}

inline Json to_json(const PrimitiveReply& r) {
  Json path = Json::array();
  for (auto s : r.path) path.push_back(to_string(s));
  Json j = {{"ok", r.ok}, {"state", to_string(r.state)}, {"path", path}, {"body", r.body}};
  if (!r.ok) j["error"] = r.error;
  return j;
}

inline PrimitiveReply reply_from_json(const Json& j) {
  PrimitiveReply r;
  r.ok = j.at("ok").get<bool>();
  r.state = parse_lifecycle(j.at("state").get<std::string>());
  for (const auto& s : j.value("path", Json::array())) r.path.push_back(parse_lifecycle(s.get<std::string>()));
  r.body = j.value("body", Json::object());
  r.error = j.value("error", std::string());
  return r;
}

inline Json to_json(const AcquisitionSession& s) {
  Json streams = Json::array();
  for (const auto& st : s.streams) streams.push_back({{"sensor", st.sensor}, {"complete", st.complete}});
  return {{"id", s.id},
          {"started_us", s.started_us},
          {"stopped_us", s.stopped_us ? Json(*s.stopped_us) : Json(nullptr)},
          {"streams", streams}};
}

inline std::string status_page(const FleetView& f, const std::vector<AcquisitionSession>& sessions) {
  std::ostringstream h;
  h << "<!doctype html><html><head><meta charset=\"utf-8\"><title>Portal acquisition</title>"
       "<meta http-equiv=\"refresh\" content=\"2\"><style>body{font-family:sans-serif}"
       "td,th{padding:2px 10px;text-align:left}.stale{color:#b00}</style></head><body>"
       "<h1>Acquisition fleet</h1><table><tr><th>sensor</th><th>kind</th><th>state</th>"
       "<th>bytes</th><th>heartbeat</th></tr>";
  for (const auto& s : f.sensors) {
    h << "<tr" << (s.stale ? " class=\"stale\"" : "") << "><td>" << http::html_escape(s.reg.descriptor.id) << "</td><td>"
      << to_string(s.reg.descriptor.kind) << "</td><td>" << to_string(s.state) << "</td><td>" << s.bytes_written
      << "</td><td>" << (s.stale ? "stale" : "ok") << "</td></tr>";
  }
  h << "</table><h2>Sessions</h2><ul>";
  for (const auto& s : sessions)
    h << "<li>" << http::html_escape(s.id) << (s.stopped_us ? " (closed)" : " (open)") << "</li>";
  h << "</ul><p>Common primitives: POST /primitive with {\"command\": \"start\"|\"stop\"|\"pause\"}.</p></body></html>";
  return h.str();
}

inline void mount_acquisition(httplib::Server& srv, AcquisitionManager& m) {
  using http::guarded;
  using http::send_json;
  srv.Post("/register", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    const Json body = http::parse_body(req);
    if (!body.contains("descriptor")) throw Error(Errc::invalid_argument, "missing descriptor");
    std::vector<std::string> specific;
    for (const auto& p : body.value("specific_primitives", Json::array())) specific.push_back(p.get<std::string>());
    const auto token = m.register_sensor(descriptor_from_json(body.at("descriptor")),
                                         body.value("endpoint", std::string()), specific);
    send_json(res, {{"token", token}}, 201);
  }));
  srv.Post("/heartbeat", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    const Json body = http::parse_body(req);
    std::optional<std::uint64_t> bytes;
    std::optional<std::string> session;
    if (body.contains("bytes_written")) bytes = body.at("bytes_written").get<std::uint64_t>();
    if (body.contains("session") && body.at("session").is_string()) session = body.at("session").get<std::string>();
    m.heartbeat(body.value("token", std::string()), parse_lifecycle(body.value("state", std::string())), bytes, session);
    send_json(res, {{"acknowledged", true}});
  }));
  srv.Get("/fleet", guarded([&m](const httplib::Request&, httplib::Response& res) { send_json(res, to_json(m.fleet())); }));
  srv.Get("/acquisitions", guarded([&m](const httplib::Request&, httplib::Response& res) {
    Json a = Json::array();
    for (const auto& s : m.sessions()) a.push_back(to_json(s));
    send_json(res, a);
  }));
  srv.Post("/primitive", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    const Json body = http::parse_body(req);
    const auto out = m.broadcast(parse_command(body.value("command", std::string())));
    send_json(res, to_json(out), out.accepted ? 200 : 409);
  }));
  srv.Post(R"(/sensor/([^/]+)/primitive/([^/]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    const auto r = m.sensor_primitive(req.matches[1], req.matches[2], http::parse_body(req));
    send_json(res, to_json(r), r.ok ? 200 : 409);
  }));
  srv.Delete(R"(/register/([^/]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    m.unregister(req.matches[1]);
    send_json(res, {{"acknowledged", true}});
  }));
  srv.Get("/", guarded([&m](const httplib::Request&, httplib::Response& res) {
    res.set_content(status_page(m.fleet(), m.sessions()), "text/html; charset=utf-8");
  }));
}

/// Sensor side: POST /primitive/{name} with JSON args -> PrimitiveReply; GET /status.
inline void mount_sensor(httplib::Server& srv, AcquisitionServer& s) {
  using http::guarded;
  srv.Post(R"(/primitive/([^/]+))", guarded([&s](const httplib::Request& req, httplib::Response& res) {
    http::send_json(res, to_json(s.handle(req.matches[1], http::parse_body(req))));
  }));
  srv.Get("/status", guarded([&s](const httplib::Request&, httplib::Response& res) {
    const auto st = s.status();
    http::send_json(res, {{"state", to_string(st.state)}, {"samples", st.samples}, {"wire_bytes", st.wire_bytes}});
  }));
}

/// Forwards primitives to "http://host:port" endpoints; "local:" endpoints go to `local`.
inline Forwarder http_forwarder(LocalFleet* local = nullptr) {
  return [local](const Registration& reg, const std::string& name, const Json& args) -> PrimitiveReply {
    if (reg.endpoint.rfind("local:", 0) == 0) {
      if (!local) throw Error(Errc::not_found, "no local fleet for " + reg.endpoint);
      return local->forwarder()(reg, name, args);
    }
    httplib::Client cli(reg.endpoint);
    cli.set_connection_timeout(2);
    cli.set_read_timeout(5);
    auto res = cli.Post("/primitive/" + name, args.dump(), "application/json");
    if (!res) throw Error(Errc::io, "sensor endpoint unreachable: " + reg.endpoint);
    return reply_from_json(Json::parse(res->body));
  };
}

struct ServiceSettings {
  http::BindAddress bind;
  double heartbeat_secs = 1.0;
  double disk_budget_MBps = 270.0;
};

inline ServiceSettings settings_from_env() {
  ServiceSettings s;
  s.bind = http::parse_bind(http::env_or("GATE_BIND_ADDR", "127.0.0.1:8080"));
  try {
    s.heartbeat_secs = std::stod(http::env_or("GATE_HEARTBEAT_SECS", "1"));
    s.disk_budget_MBps = std::stod(http::env_or("GATE_DISK_BUDGET_MBPS", "270"));
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "GATE_HEARTBEAT_SECS and GATE_DISK_BUDGET_MBPS must be numbers");
  }
  if (s.heartbeat_secs <= 0 || s.disk_budget_MBps <= 0) throw Error(Errc::invalid_argument, "service settings must be positive");
  return s;
}

}  // namespace gate::acquisition
