#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>

// <resolv.h> (pulled in by httplib) defines `_res` as a macro, which breaks Eigen's
// parameter names when Eigen is included afterwards. httplib does not use it.
#ifdef _res
#undef _res
#endif

#include "gate/core/json.hpp"

namespace gate::http {

inline int status_for(Errc c) {
  switch (c) {
    case Errc::conflict: return 409;
    case Errc::unauthorized: return 401;
    case Errc::not_found:
    case Errc::missing_artifact: return 404;
    case Errc::invalid_argument:
    case Errc::parse:
    case Errc::out_of_range: return 400;
    default: return 500;
  }
}

inline void send_json(httplib::Response& res, const Json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(2) + "\n", "application/json");
}

inline void send_error(httplib::Response& res, const Error& e) {
  send_json(res, {{"error", to_string(e.code())}, {"message", e.what()}}, status_for(e.code()));
}

inline Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::parse, std::string("request body is not valid JSON: ") + e.what());
  }
}

/// Wraps a handler so library errors become structured JSON responses.
template <typename F>
auto guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const Json::exception& e) {
      send_error(res, Error(Errc::invalid_argument, e.what()));
    }
  };
}

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

inline BindAddress parse_bind(const std::string& s) {
  BindAddress b;
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::invalid_argument, "bind address must be host:port, got " + s);
  b.host = s.substr(0, colon);
  try {
    b.port = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "bad port in bind address " + s);
  }
  if (b.port < 0 || b.port > 65535) throw Error(Errc::invalid_argument, "port out of range in " + s);
  return b;
}

inline std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

inline std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace gate::http
