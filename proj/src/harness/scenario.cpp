#include "vgrasp/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "vgrasp/geometry/primitives.hpp"
#include "vgrasp/io/json_math.hpp"

namespace vgrasp {

namespace {

using nlohmann::json;
using json_io::read_transform;
using json_io::read_vec3;

ObjectSpec read_object(const json& j, std::size_t index)
{
  ObjectSpec spec;
  spec.label = j.value("label", "object_" + std::to_string(index));
  if (j.contains("sphere")) {
    const json& s = j.at("sphere");
    SpherePrimitive p;
    p.radius = s.value("radius", p.radius);
    p.subdivisions = s.value("subdivisions", p.subdivisions);
    spec.source = p;
  } else if (j.contains("box")) {
    BoxPrimitive p;
    if (j.at("box").contains("extents"))
      p.extents = read_vec3(j.at("box").at("extents"), "box extents");
    spec.source = p;
  } else if (j.contains("cylinder")) {
    const json& c = j.at("cylinder");
    CylinderPrimitive p;
    p.radius = c.value("radius", p.radius);
    p.height = c.value("height", p.height);
    p.segments = c.value("segments", p.segments);
    spec.source = p;
  } else if (j.contains("obj")) {
    spec.source = ObjFile{j.at("obj").get<std::string>()};
  } else {
    throw InvalidInput("object '" + spec.label + "' needs one of sphere, box, cylinder, obj");
  }
  return spec;
}

Keyframe read_keyframe(const json& j)
{
  Keyframe k;
  k.time = j.at("t").get<double>();
  if (j.contains("palm"))
    k.palm = read_transform(j.at("palm"));
  k.close_fraction = j.value("close", 0.0);
  const std::string space = j.value("space", "world");
  if (space == "object")
    k.space = KeyframeSpace::Object;
  else if (space != "world")
    throw InvalidInput("keyframe space must be \"world\" or \"object\"");
  return k;
}

}  // namespace

void ScenarioConfig::validate() const
{
  if (objects.empty())
    throw InvalidInput("scenario lists no objects");
  require_finite(spawn_min, "spawn region min");
  require_finite(spawn_max, "spawn region max");
  if (!(spawn_min.x < spawn_max.x && spawn_min.y < spawn_max.y && spawn_min.z < spawn_max.z))
    throw InvalidInput("spawn region must have min < max on every axis");
  if (!(fps > 0.0) || !std::isfinite(fps))
    throw InvalidInput("fps must be positive");
  if (!(max_trial_seconds > 0.0) || !std::isfinite(max_trial_seconds))
    throw InvalidInput("max trial seconds must be positive");
  if (!(close_rate > 0.0) || !std::isfinite(close_rate))
    throw InvalidInput("close rate must be positive");
  if (trajectory.empty())
    throw InvalidInput("scenario trajectory has no keyframes");
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const Keyframe& k = trajectory[i];
    if (!std::isfinite(k.time) || (i > 0 && !(trajectory[i - 1].time < k.time)))
      throw InvalidInput("trajectory keyframes must have strictly increasing times");
    if (!(k.close_fraction >= 0.0 && k.close_fraction <= 1.0))
      throw InvalidInput("keyframe close fraction must lie in [0, 1]");
    k.palm.validate("keyframe palm");
  }
  hand.skeleton.validate();
  hand.triggers.validate();
}

ScenarioConfig scenario_from_json(const json& doc, const std::filesystem::path& base_dir)
{
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  try {
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.fps = doc.value("fps", cfg.fps);
    cfg.max_trial_seconds = doc.value("max_trial_seconds", cfg.max_trial_seconds);
    cfg.close_rate = doc.value("close_rate", cfg.close_rate);
    cfg.group = doc.value("group", cfg.group);
    if (doc.contains("hand")) {
      const json& h = doc.at("hand");
      cfg.hand = h.is_string() ? load_hand_model(base_dir / h.get<std::string>())
                               : hand_model_from_json(h);
    }
    if (doc.contains("spawn_region")) {
      const json& r = doc.at("spawn_region");
      cfg.spawn_min = read_vec3(r.at("min"), "spawn region min");
      cfg.spawn_max = read_vec3(r.at("max"), "spawn region max");
    }
    const json& objects = doc.at("objects");
    for (std::size_t i = 0; i < objects.size(); ++i)
      cfg.objects.push_back(read_object(objects[i], i));
    for (const json& k : doc.at("trajectory"))
      cfg.trajectory.push_back(read_keyframe(k));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed scenario: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw LoadError("cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc, path.parent_path());
}

std::vector<std::shared_ptr<const TriangleMesh>> build_meshes(const ScenarioConfig& cfg)
{
  std::vector<std::shared_ptr<const TriangleMesh>> out;
  out.reserve(cfg.objects.size());
  for (const ObjectSpec& spec : cfg.objects) {
    out.push_back(std::visit(
        [&](const auto& s) -> std::shared_ptr<const TriangleMesh> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, SpherePrimitive>)
            return std::make_shared<const TriangleMesh>(make_icosphere(s.radius, s.subdivisions));
          else if constexpr (std::is_same_v<S, BoxPrimitive>)
            return std::make_shared<const TriangleMesh>(make_box(s.extents));
          else if constexpr (std::is_same_v<S, CylinderPrimitive>)
            return std::make_shared<const TriangleMesh>(
                make_cylinder(s.radius, s.height, s.segments));
          else
            return std::make_shared<const TriangleMesh>(
                load_obj(s.path.is_absolute() ? s.path : cfg.base_dir / s.path));
        },
        spec.source));
  }
  return out;
}

Quat uniform_rotation(double u1, double u2, double u3)
{
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return Quat{b * std::cos(kTwoPi * u3), a * std::sin(kTwoPi * u2), a * std::cos(kTwoPi * u2),
              b * std::sin(kTwoPi * u3)};
}

PlacedMesh spawn_object(const ScenarioConfig& cfg,
                        const std::vector<std::shared_ptr<const TriangleMesh>>& meshes,
                        std::size_t index, Xoshiro256& rng)
{
  if (index >= cfg.objects.size() || index >= meshes.size())
    throw InvalidInput("object index " + std::to_string(index) + " out of range");
  const Vec3 span = cfg.spawn_max - cfg.spawn_min;
  Vec3 position;
  position.x = cfg.spawn_min.x + rng.uniform() * span.x;
  position.y = cfg.spawn_min.y + rng.uniform() * span.y;
  position.z = cfg.spawn_min.z + rng.uniform() * span.z;
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  return PlacedMesh{ObjectId{static_cast<std::uint32_t>(index)}, meshes[index],
                    Transform{uniform_rotation(u1, u2, u3), position}};
}

TrajectorySample sample_trajectory(const std::vector<Keyframe>& keys, double time,
                                   const Vec3& object_position)
{
  if (keys.empty())
    throw InvalidInput("empty trajectory");
  auto resolve = [&](const Keyframe& k) {
    Transform palm = k.palm;
    if (k.space == KeyframeSpace::Object)
      palm.translation += object_position;
    return palm;
  };
  if (time <= keys.front().time)
    return {resolve(keys.front()), keys.front().close_fraction};
  if (time >= keys.back().time)
    return {resolve(keys.back()), keys.back().close_fraction};

  const auto next = std::upper_bound(keys.begin(), keys.end(), time,
                                     [](double t, const Keyframe& k) { return t < k.time; });
  const Keyframe& b = *next;
  const Keyframe& a = *(next - 1);
  const double s = (time - a.time) / (b.time - a.time);
  const Transform pa = resolve(a);
  const Transform pb = resolve(b);
  return {Transform{slerp(pa.rotation, pb.rotation, s), lerp(pa.translation, pb.translation, s)},
          a.close_fraction + (b.close_fraction - a.close_fraction) * s};
}

}  // namespace vgrasp
