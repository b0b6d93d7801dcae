#pragma once

#include "gazegrasp/geometry.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace gazegrasp::json_util {

inline nlohmann::json parse(std::string_view text, const std::string& what) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string qualify(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const std::string& key,
                                           const std::string& where = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(qualify(where, key) + ": missing field");
  return *it;
}

template <class T>
T require(const nlohmann::json& obj, const std::string& key, const std::string& where = {}) {
  const auto& v = require_field(obj, key, where);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ParseError(qualify(where, key) + ": expected string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ParseError(qualify(where, key) + ": expected boolean");
  } else {
    if (!v.is_number()) throw ParseError(qualify(where, key) + ": expected number");
  }
  return v.get<T>();
}

template <class T>
T optional(const nlohmann::json& obj, const std::string& key, T fallback, const std::string& where = {}) {
  if (!obj.contains(key)) return fallback;
  return require<T>(obj, key, where);
}

inline Vec3 to_vec3(const nlohmann::json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
    throw ParseError(what + ": expected [x, y, z]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline Vec3 require_vec3(const nlohmann::json& obj, const std::string& key, const std::string& where = {}) {
  return to_vec3(require_field(obj, key, where), qualify(where, key));
}

inline nlohmann::json vec3(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

inline nlohmann::json rect(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

}  // namespace gazegrasp::json_util
