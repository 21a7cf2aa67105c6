#pragma once

// Central AcquisitionManager: registration, heartbeats, fleet-wide primitives with atomic
// refusal, sensor-specific primitives and acquisition session records. All mutations are
// serialized under one mutex; every state change of its fleet view is recorded as a
// Transition so the trace can be validated independently.

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>

#include "gate/acquisition/server.hpp"

namespace gate::acquisition {

struct Registration {
  SensorDescriptor descriptor;
  std::string endpoint;
  std::string token;
  std::vector<std::string> specific_primitives;
};

struct SensorView {
  Registration reg;
  Lifecycle state = Lifecycle::idle;
  std::int64_t last_heartbeat_us = 0;
  std::uint64_t bytes_written = 0;
  std::optional<std::string> session;
  bool stale = false;
};

struct FleetView {
  std::int64_t at_us = 0;
  std::vector<SensorView> sensors;  ///< registration order

  const SensorView* find(const std::string& id) const {
    for (const auto& s : sensors)
      if (s.reg.descriptor.id == id) return &s;
    return nullptr;
  }
};

enum class Command { start, stop, pause };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::start: return "start";
    case Command::stop: return "stop";
    case Command::pause: return "pause";
  }
  return "?";
}

inline Command parse_command(const std::string& s) {
  if (s == "start") return Command::start;
  if (s == "stop") return Command::stop;
  if (s == "pause") return Command::pause;
  throw Error(Errc::invalid_argument, "unknown command: " + s);
}

struct BroadcastOutcome {
  Command command = Command::start;
  bool accepted = false;
  std::string reason;
  std::vector<std::string> blockers;  ///< sensors that caused a refusal
  std::optional<std::string> session;
  std::map<std::string, std::string> per_sensor;  ///< id -> resulting state or delivery error
};

struct StreamRecord {
  std::string sensor;
  bool complete = true;
};

struct AcquisitionSession {
  std::string id;
  std::int64_t started_us = 0;
  std::optional<std::int64_t> stopped_us;
  std::vector<StreamRecord> streams;
};

/// Delivers a primitive to the sensor behind a registration.
using Forwarder = std::function<PrimitiveReply(const Registration&, const std::string&, const Json&)>;

struct ManagerConfig {
  std::int64_t heartbeat_period_us = 1'000'000;
  int stale_after_beats = 3;
  std::uint64_t seed = 0x5eed;
};

class AcquisitionManager {
 public:
  AcquisitionManager(const Clock& clock, Forwarder forward, ManagerConfig cfg = {})
      : clock_(&clock), forward_(std::move(forward)), cfg_(cfg), rng_(cfg.seed) {}

  const ManagerConfig& config() const { return cfg_; }

  std::string register_sensor(const SensorDescriptor& d, std::string endpoint,
                              std::vector<std::string> specific = {}) {
    d.validate();
    const auto allowed = supported_primitives(d.kind);
    for (const auto& p : specific)
      if (std::find(allowed.begin(), allowed.end(), p) == allowed.end())
        throw Error(Errc::invalid_argument, "primitive '" + p + "' is not available on " + to_string(d.kind));
    std::lock_guard lk(mu_);
    if (index_of_id(d.id) >= 0) throw Error(Errc::conflict, "sensor '" + d.id + "' is already registered");
    std::string token;
    do token = make_token();
    while (index_of_token(token) >= 0);
    SensorView v;
    v.reg = {d, std::move(endpoint), token, std::move(specific)};
    v.last_heartbeat_us = clock_->now_us();
    fleet_.push_back(std::move(v));
    trace_.push_back({d.id, Lifecycle::idle, Lifecycle::idle, clock_->now_us(), true});
    return token;
  }

  /// Accepts the sensor's reported state. An illegal jump is rejected (conflict) and the
  /// sensor is marked ERROR in the fleet view.
  void heartbeat(const std::string& token, Lifecycle state, std::optional<std::uint64_t> bytes = std::nullopt,
                 std::optional<std::string> session = std::nullopt) {
    std::lock_guard lk(mu_);
    const int i = index_of_token(token);
    if (i < 0) throw Error(Errc::unauthorized, "unknown token");
    auto& v = fleet_[static_cast<std::size_t>(i)];
    v.last_heartbeat_us = clock_->now_us();
    if (bytes) v.bytes_written = *bytes;
    if (session) v.session = *session;
    if (state == v.state) return;
    if (!legal_transition(v.state, state)) {
      const std::string msg = std::string("illegal transition ") + to_string(v.state) + " -> " + to_string(state);
      record(v, Lifecycle::error);
      throw Error(Errc::conflict, msg);
    }
    record(v, state);
  }

  BroadcastOutcome broadcast(Command c) {
    std::lock_guard lk(mu_);
    BroadcastOutcome out;
    out.command = c;
    const auto now = clock_->now_us();
    std::vector<std::size_t> targets;
    switch (c) {
      case Command::start:
        if (fleet_.empty()) out.reason = "no sensors registered";
        for (std::size_t i = 0; i < fleet_.size(); ++i) {
          const auto& v = fleet_[i];
          if (v.state != Lifecycle::idle || is_stale(v, now)) out.blockers.push_back(v.reg.descriptor.id);
          targets.push_back(i);
        }
        if (!out.blockers.empty()) out.reason = "start requires every sensor IDLE and live";
        break;
      case Command::stop:
        for (std::size_t i = 0; i < fleet_.size(); ++i) {
          const auto& v = fleet_[i];
          if (v.state == Lifecycle::saving) out.blockers.push_back(v.reg.descriptor.id);
          if (v.state == Lifecycle::acquiring || v.state == Lifecycle::paused) targets.push_back(i);
        }
        if (!out.blockers.empty()) out.reason = "a sensor is still saving recently acquired data";
        break;
      case Command::pause: {
        std::size_t acq = 0, paused = 0;
        for (const auto& v : fleet_) {
          acq += v.state == Lifecycle::acquiring;
          paused += v.state == Lifecycle::paused;
        }
        const Lifecycle want = acq > 0 ? Lifecycle::acquiring : Lifecycle::paused;
        for (std::size_t i = 0; i < fleet_.size(); ++i) {
          if (fleet_[i].state != want) out.blockers.push_back(fleet_[i].reg.descriptor.id);
          targets.push_back(i);
        }
        if (acq + paused == 0) out.reason = "no acquisition in progress";
        else if (!out.blockers.empty()) out.reason = "pause requires every sensor ACQUIRING (or every sensor PAUSED)";
        break;
      }
    }
    if (!out.reason.empty()) return out;  // refused: nothing was delivered, nothing changed

    out.accepted = true;
    Json args = Json::object();
    if (c == Command::start) {
      AcquisitionSession s;
      s.id = next_session_id();
      s.started_us = now;
      for (const auto& v : fleet_) s.streams.push_back({v.reg.descriptor.id, true});
      sessions_.push_back(s);
      out.session = s.id;
      args["session"] = s.id;
    }
    for (auto i : targets) {
      auto& v = fleet_[i];
      PrimitiveReply r;
      try {
        r = forward_(v.reg, to_string(c), args);
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
      if (!r.ok) {
        record(v, Lifecycle::error);
        out.per_sensor[v.reg.descriptor.id] = "delivery failed: " + r.error;
        continue;
      }
      for (auto st : r.path) record(v, legal_transition(v.state, st) ? st : Lifecycle::error);
      if (c == Command::start) v.session = out.session;
      out.per_sensor[v.reg.descriptor.id] = to_string(v.state);
    }
    if (c == Command::stop) {
      if (auto* s = open_session()) s->stopped_us = now;
    }
    return out;
  }

  PrimitiveReply sensor_primitive(const std::string& id, const std::string& name, const Json& args = Json::object()) {
    std::lock_guard lk(mu_);
    const int i = index_of_id(id);
    if (i < 0) throw Error(Errc::not_found, "unknown sensor '" + id + "'");
    auto& v = fleet_[static_cast<std::size_t>(i)];
    const auto& decl = v.reg.specific_primitives;
    if (std::find(decl.begin(), decl.end(), name) == decl.end())
      throw Error(Errc::conflict, "sensor '" + id + "' does not declare primitive '" + name + "'");
    return forward_(v.reg, name, args);
  }

  void unregister(const std::string& token) {
    std::lock_guard lk(mu_);
    const int i = index_of_token(token);
    if (i < 0) throw Error(Errc::unauthorized, "unknown token");
    auto& v = fleet_[static_cast<std::size_t>(i)];
    if (v.state == Lifecycle::acquiring || v.state == Lifecycle::paused || v.state == Lifecycle::saving) {
      if (auto* s = open_session()) {
        for (auto& st : s->streams)
          if (st.sensor == v.reg.descriptor.id) st.complete = false;
      }
    }
    fleet_.erase(fleet_.begin() + i);
  }

  FleetView fleet() const {
    std::lock_guard lk(mu_);
    FleetView f;
    f.at_us = clock_->now_us();
    f.sensors = fleet_;
    for (auto& s : f.sensors) s.stale = is_stale(s, f.at_us);
    return f;
  }

  std::vector<AcquisitionSession> sessions() const {
    std::lock_guard lk(mu_);
    return sessions_;
  }

  std::vector<Transition> trace() const {
    std::lock_guard lk(mu_);
    return trace_;
  }

  std::optional<std::string> token_of(const std::string& id) const {
    std::lock_guard lk(mu_);
    const int i = index_of_id(id);
    if (i < 0) return std::nullopt;
    return fleet_[static_cast<std::size_t>(i)].reg.token;
  }

 private:
  bool is_stale(const SensorView& v, std::int64_t now) const {
    return now - v.last_heartbeat_us > cfg_.heartbeat_period_us * cfg_.stale_after_beats;
  }

  int index_of_id(const std::string& id) const {
    for (std::size_t i = 0; i < fleet_.size(); ++i)
      if (fleet_[i].reg.descriptor.id == id) return static_cast<int>(i);
    return -1;
  }
  int index_of_token(const std::string& t) const {
    for (std::size_t i = 0; i < fleet_.size(); ++i)
      if (fleet_[i].reg.token == t) return static_cast<int>(i);
    return -1;
  }

  std::string make_token() {
    std::ostringstream s;
    s << std::hex << rng_() << rng_();
    return s.str();
  }

  std::string next_session_id() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "acq-%06d", ++session_counter_);
    return buf;
  }

  AcquisitionSession* open_session() {
    for (auto it = sessions_.rbegin(); it != sessions_.rend(); ++it)
      if (!it->stopped_us) return &*it;
    return nullptr;
  }

  void record(SensorView& v, Lifecycle to) {
    if (v.state == to) return;
    trace_.push_back({v.reg.descriptor.id, v.state, to, clock_->now_us()});
    v.state = to;
  }

  const Clock* clock_;
  Forwarder forward_;
  ManagerConfig cfg_;
  mutable std::mutex mu_;
  std::mt19937_64 rng_;
  std::vector<SensorView> fleet_;
  std::vector<AcquisitionSession> sessions_;
  std::vector<Transition> trace_;
  int session_counter_ = 0;
};

/// In-process sensors addressed as "local:<id>", wired to a manager without any network.
class LocalFleet {
 public:
  explicit LocalFleet(const Clock& clock) : clock_(&clock) {}

  AcquisitionServer& add(const SensorDescriptor& d) {
    servers_.push_back(std::make_unique<AcquisitionServer>(d, *clock_));
    return *servers_.back();
  }

  AcquisitionServer* find(const std::string& id) {
    for (auto& s : servers_)
      if (s->descriptor().id == id) return s.get();
    return nullptr;
  }

  std::vector<std::unique_ptr<AcquisitionServer>>& servers() { return servers_; }

  Forwarder forwarder() {
    return [this](const Registration& reg, const std::string& name, const Json& args) {
      const std::string prefix = "local:";
      if (reg.endpoint.rfind(prefix, 0) != 0) throw Error(Errc::invalid_argument, "not a local endpoint: " + reg.endpoint);
      auto* s = find(reg.endpoint.substr(prefix.size()));
      if (!s) throw Error(Errc::not_found, "no local sensor behind " + reg.endpoint);
      return s->handle(name, args);
    };
  }

  void register_all(AcquisitionManager& m) {
    for (auto& s : servers_) {
      const auto& d = s->descriptor();
      tokens_[d.id] = m.register_sensor(d, "local:" + d.id, supported_primitives(d.kind));
    }
  }

  /// One heartbeat per currently registered sensor with its current state.
  void beat(AcquisitionManager& m) {
    for (auto& s : servers_) {
      const auto st = s->status();
      const auto tok = m.token_of(s->descriptor().id);
      if (!tok) continue;
      try {
        m.heartbeat(*tok, st.state, st.wire_bytes, st.session);
      } catch (const Error& e) {
        if (e.code() != Errc::conflict) throw;
      }
    }
  }

  const std::map<std::string, std::string>& tokens() const { return tokens_; }

 private:
  const Clock* clock_;
  std::vector<std::unique_ptr<AcquisitionServer>> servers_;
  std::map<std::string, std::string> tokens_;
};

}  // namespace gate::acquisition
