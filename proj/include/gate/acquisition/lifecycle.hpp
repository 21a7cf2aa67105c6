#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gate/core/error.hpp"

namespace gate::acquisition {

enum class Lifecycle { idle, acquiring, paused, saving, error };

inline const char* to_string(Lifecycle s) {
  switch (s) {
    case Lifecycle::idle: return "IDLE";
    case Lifecycle::acquiring: return "ACQUIRING";
    case Lifecycle::paused: return "PAUSED";
    case Lifecycle::saving: return "SAVING";
    case Lifecycle::error: return "ERROR";
  }
  return "?";
}

inline Lifecycle parse_lifecycle(const std::string& s) {
  for (auto v : {Lifecycle::idle, Lifecycle::acquiring, Lifecycle::paused, Lifecycle::saving, Lifecycle::error})
    if (s == to_string(v)) return v;
  throw Error(Errc::invalid_argument, "unknown lifecycle state: " + s);
}

inline bool legal_transition(Lifecycle from, Lifecycle to) {
  using L = Lifecycle;
  if (to == L::error) return true;
  switch (from) {
    case L::idle: return to == L::acquiring;
    case L::acquiring: return to == L::paused || to == L::saving;
    case L::paused: return to == L::acquiring;
    case L::saving: return to == L::idle;
    case L::error: return to == L::idle;
  }
  return false;
}

struct Transition {
  std::string sensor;
  Lifecycle from;
  Lifecycle to;
  std::int64_t at_us = 0;
  bool registration = false;  ///< marks a fresh registration (state restarts at IDLE)
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Independent re-check of a recorded trace: per-sensor continuity and legality.
struct TransitionValidator {
  std::size_t checked = 0;
  std::size_t illegal = 0;
  std::vector<std::string> messages;

  void check(const std::vector<Transition>& trace) {
    std::vector<std::pair<std::string, Lifecycle>> last;
    for (const auto& t : trace) {
      auto it = std::find_if(last.begin(), last.end(), [&](const auto& p) { return p.first == t.sensor; });
      if (t.registration) {
        if (it == last.end()) last.emplace_back(t.sensor, Lifecycle::idle);
        else it->second = Lifecycle::idle;
        continue;
      }
      ++checked;
      bool ok = legal_transition(t.from, t.to);
      if (it != last.end() && it->second != t.from) ok = false;  // trace skipped a step
      if (!ok) {
        ++illegal;
        messages.push_back(t.sensor + ": " + to_string(t.from) + " -> " + to_string(t.to));
      }
      if (it == last.end()) last.emplace_back(t.sensor, t.to);
      else it->second = t.to;
    }
  }
};

}  // namespace gate::acquisition
