#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gate/core/error.hpp"
#include "gate/imgcore/image.hpp"

namespace gate {

using Json = nlohmann::ordered_json;

inline Json box_json(const BBox& b) { return Json::array({b.x, b.y, b.w, b.h}); }

inline BBox box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(Errc::parse, "box must be [x, y, w, h]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

inline void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_artifact, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, path.string() + ": " + e.what());
  }
}

}  // namespace gate
