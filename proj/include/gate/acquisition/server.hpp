#pragma once

// Sensor-side AcquisitionServer: owns one camera's lifecycle, emits samples at the
// descriptor rate against the injected clock while ACQUIRING, and drains its write queue
// in SAVING before returning to IDLE.

#include <cmath>
#include <functional>
#include <mutex>
#include <optional>

#include "gate/acquisition/clock.hpp"
#include "gate/acquisition/lifecycle.hpp"
#include "gate/acquisition/sensor.hpp"

namespace gate::acquisition {

struct PrimitiveReply {
  bool ok = false;
  Lifecycle state = Lifecycle::idle;
  std::vector<Lifecycle> path;  ///< states passed through, in order (excluding the start state)
  Json body = Json::object();
  std::string error;
};

struct SensorStatus {
  Lifecycle state = Lifecycle::idle;
  std::uint64_t samples = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t wire_bytes = 0;
  std::optional<std::string> session;
};

/// Called for every emitted sample with its index within the session and its timestamp.
using SampleSink = std::function<void(std::uint64_t index, std::int64_t t_us)>;

class AcquisitionServer {
 public:
  AcquisitionServer(SensorDescriptor d, const Clock& clock, double drain_speedup = 2.0)
      : desc_(std::move(d)), clock_(&clock), drain_speedup_(drain_speedup) {
    desc_.validate();
  }

  const SensorDescriptor& descriptor() const { return desc_; }
  void set_sink(SampleSink sink) { sink_ = std::move(sink); }

  SensorStatus status() {
    std::lock_guard lk(mu_);
    advance();
    return status_;
  }
  Lifecycle state() {
    std::lock_guard lk(mu_);
    advance();
    return status_.state;
  }
  std::vector<Transition> trace() const {
    std::lock_guard lk(mu_);
    return trace_;
  }
  std::int64_t focus_position() const { return focus_; }

  /// Brings emission and draining up to the current clock.
  void tick() {
    std::lock_guard lk(mu_);
    advance();
  }

  PrimitiveReply handle(const std::string& name, const Json& args = Json::object()) {
    std::lock_guard lk(mu_);
    advance();
    PrimitiveReply r;
    const Lifecycle before = status_.state;
    if (name == "start") {
      if (before != Lifecycle::idle) return refuse(r, "start requires IDLE");
      status_ = {};
      status_.session = args.value("session", std::string("unnamed"));
      active_us_ = 0;
      segment_start_ = clock_->now_us();
      move(Lifecycle::acquiring, r);
    } else if (name == "pause") {
      if (before == Lifecycle::acquiring) {
        active_us_ += clock_->now_us() - segment_start_;
        move(Lifecycle::paused, r);
      } else if (before == Lifecycle::paused) {
        segment_start_ = clock_->now_us();
        move(Lifecycle::acquiring, r);
      } else {
        return refuse(r, "pause requires ACQUIRING or PAUSED");
      }
    } else if (name == "stop") {
      if (before == Lifecycle::paused) {
        segment_start_ = clock_->now_us();
        move(Lifecycle::acquiring, r);
      } else if (before != Lifecycle::acquiring) {
        return refuse(r, "stop requires ACQUIRING or PAUSED");
      }
      active_us_ += clock_->now_us() - segment_start_;
      const double drain_Bps = desc_.declared_rate_Bps() * drain_speedup_;
      saving_until_ = clock_->now_us() + static_cast<std::int64_t>(std::ceil(status_.wire_bytes / drain_Bps * 1e6));
      move(Lifecycle::saving, r);
    } else if (name == "reset") {
      if (before != Lifecycle::error) return refuse(r, "reset requires ERROR");
      move(Lifecycle::idle, r);
    } else if (name == "fail") {
      move(Lifecycle::error, r);
    } else if (is_specific(name)) {
      if (name == "focus") focus_ = args.value("position", focus_);
      r.body = {{"primitive", name}, {"acknowledged", true}};
    } else {
      return refuse(r, "unsupported primitive: " + name);
    }
    r.ok = true;
    r.state = status_.state;
    return r;
  }

 private:
  bool is_specific(const std::string& name) const {
    const auto s = supported_primitives(desc_.kind);
    return std::find(s.begin(), s.end(), name) != s.end();
  }

  PrimitiveReply& refuse(PrimitiveReply& r, std::string why) {
    r.ok = false;
    r.state = status_.state;
    r.error = std::move(why);
    return r;
  }

  void move(Lifecycle to, PrimitiveReply& r) {
    trace_.push_back({desc_.id, status_.state, to, clock_->now_us()});
    status_.state = to;
    r.path.push_back(to);
  }

  void emit_until(std::int64_t active_us) {
    const auto target = static_cast<std::uint64_t>(active_us) * desc_.rate_hz / 1'000'000ULL;
    while (status_.samples < target) {
      if (sink_) sink_(status_.samples, static_cast<std::int64_t>(status_.samples * 1'000'000ULL / desc_.rate_hz));
      ++status_.samples;
      status_.payload_bytes += desc_.payload_bytes_per_sample();
      status_.wire_bytes += desc_.wire_bytes_per_sample();
    }
  }

  void advance() {
    const std::int64_t now = clock_->now_us();
    if (status_.state == Lifecycle::acquiring) emit_until(active_us_ + (now - segment_start_));
    if (status_.state == Lifecycle::saving) {
      emit_until(active_us_);
      if (now >= saving_until_) {
        trace_.push_back({desc_.id, Lifecycle::saving, Lifecycle::idle, now});
        status_.state = Lifecycle::idle;
      }
    }
  }

  SensorDescriptor desc_;
  const Clock* clock_;
  double drain_speedup_;
  mutable std::mutex mu_;
  SensorStatus status_;
  std::vector<Transition> trace_;
  std::int64_t active_us_ = 0;
  std::int64_t segment_start_ = 0;
  std::int64_t saving_until_ = 0;
  std::int64_t focus_ = 0;
  SampleSink sink_;
};

}  // namespace gate::acquisition
