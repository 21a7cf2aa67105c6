#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace gate::acquisition {

/// Microsecond time source. Tests inject VirtualClock; the demo service uses WallClock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_us() const = 0;
};

class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(std::int64_t start_us = 0) : t_(start_us) {}
  std::int64_t now_us() const override { return t_.load(); }
  void advance_us(std::int64_t d) { t_ += d; }
  void set_us(std::int64_t t) { t_ = t; }

 private:
  std::atomic<std::int64_t> t_;
};

class WallClock final : public Clock {
 public:
  std::int64_t now_us() const override {
    return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - origin_).count();
  }

 private:
  std::chrono::steady_clock::time_point origin_ = std::chrono::steady_clock::now();
};

}  // namespace gate::acquisition
