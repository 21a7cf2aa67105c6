#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gate {

enum class Errc {
  invalid_argument,
  io,
  parse,
  version_mismatch,
  missing_artifact,
  out_of_range,
  mismatched_input,
  // wagon-ID segmentation
  no_candidates,
  low_confidence,
  // pantograph
  image_too_small,
  too_few_descriptors,
  insufficient_matches,
  // acquisition
  conflict,
  unauthorized,
  not_found,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io: return "io";
    case Errc::parse: return "parse";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::missing_artifact: return "missing_artifact";
    case Errc::out_of_range: return "out_of_range";
    case Errc::mismatched_input: return "mismatched_input";
    case Errc::no_candidates: return "no_candidates";
    case Errc::low_confidence: return "low_confidence";
    case Errc::image_too_small: return "image_too_small";
    case Errc::too_few_descriptors: return "too_few_descriptors";
    case Errc::insufficient_matches: return "insufficient_matches";
    case Errc::conflict: return "conflict";
    case Errc::unauthorized: return "unauthorized";
    case Errc::not_found: return "not_found";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gate
