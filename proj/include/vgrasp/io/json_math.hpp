#pragma once

#include <string>

#include <json.hpp>

#include "vgrasp/geometry/math.hpp"

namespace vgrasp::json_io {

inline Vec3 read_vec3(const nlohmann::json& j, const char* what)
{
  if (!j.is_array() || j.size() != 3)
    throw InvalidInput(std::string(what) + " must be an array of 3 numbers");
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  require_finite(v, what);
  return v;
}

inline nlohmann::json write_vec3(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

// Quaternions are stored as [w, x, y, z] and normalized on read.
inline Quat read_quat(const nlohmann::json& q, const char* what)
{
  if (!q.is_array() || q.size() != 4)
    throw InvalidInput(std::string(what) + " must be a [w, x, y, z] quaternion");
  return Quat{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()}
      .normalized();
}

inline nlohmann::json write_quat(const Quat& q) { return nlohmann::json::array({q.w, q.x, q.y, q.z}); }

// {"translation": [x, y, z], "rotation": [w, x, y, z]}; both keys optional.
inline Transform read_transform(const nlohmann::json& j)
{
  Transform t;
  if (j.contains("translation"))
    t.translation = read_vec3(j.at("translation"), "translation");
  if (j.contains("rotation"))
    t.rotation = read_quat(j.at("rotation"), "rotation");
  return t;
}

inline nlohmann::json write_transform(const Transform& t)
{
  return {{"translation", write_vec3(t.translation)}, {"rotation", write_quat(t.rotation)}};
}

}  // namespace vgrasp::json_io
