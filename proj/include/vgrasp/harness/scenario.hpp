#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vgrasp/geometry/queries.hpp"
#include "vgrasp/hand/hand_config.hpp"
#include "vgrasp/harness/rng.hpp"

namespace vgrasp {

struct SpherePrimitive
{
  double radius = 0.033;
  int subdivisions = 3;
};

struct BoxPrimitive
{
  Vec3 extents{0.06, 0.16, 0.21};
};

struct CylinderPrimitive
{
  double radius = 0.033;
  double height = 0.10;
  int segments = 32;
};

struct ObjFile
{
  std::filesystem::path path;
};

using MeshSource = std::variant<SpherePrimitive, BoxPrimitive, CylinderPrimitive, ObjFile>;

struct ObjectSpec
{
  std::string label;
  MeshSource source;
};

enum class KeyframeSpace : std::uint8_t { World, Object };

struct Keyframe
{
  double time = 0.0;
  // Palm pose; in Object space the translation is relative to the spawned
  // object's position (the object's orientation is ignored).
  Transform palm;
  double close_fraction = 0.0;
  KeyframeSpace space = KeyframeSpace::World;
};

struct ScenarioConfig
{
  std::vector<ObjectSpec> objects;
  Vec3 spawn_min{-0.2, -0.2, 0.0};
  Vec3 spawn_max{0.2, 0.2, 0.1};
  std::uint64_t seed = 0;
  double fps = 90.0;
  double max_trial_seconds = 30.0;
  double close_rate = kDefaultCloseRate;
  std::string group = "default";
  HandModel hand{HandSkeleton::make_default(), TriggerLayout::make_default()};
  std::vector<Keyframe> trajectory;
  // Directory OBJ paths are resolved against.
  std::filesystem::path base_dir;

  void validate() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Builds every object's mesh once, in list order. Throws LoadError naming
/// the file for OBJ sources that fail to load.
std::vector<std::shared_ptr<const TriangleMesh>> build_meshes(const ScenarioConfig& cfg);

/// Uniform random unit quaternion from three uniform variates (Shoemake's
/// subgroup construction).
Quat uniform_rotation(double u1, double u2, double u3);

/// Places object `index` at a uniform position in the spawn region with a
/// uniform orientation. Consumes exactly six draws: three for the position,
/// then three for the rotation.
PlacedMesh spawn_object(const ScenarioConfig& cfg,
                        const std::vector<std::shared_ptr<const TriangleMesh>>& meshes,
                        std::size_t index, Xoshiro256& rng);

struct TrajectorySample
{
  Transform palm;
  double close_fraction = 0.0;
};

/// Piecewise-linear keyframe interpolation (slerp for rotations), clamped to
/// the first and last keyframe outside their time span.
TrajectorySample sample_trajectory(const std::vector<Keyframe>& keys, double time,
                                   const Vec3& object_position);

}  // namespace vgrasp
