#include "vgrasp/hand/hand_config.hpp"

#include <fstream>
#include <numbers>

#include "vgrasp/io/json_math.hpp"

namespace vgrasp {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

using json_io::read_transform;
using json_io::read_vec3;
using json_io::write_vec3;

}  // namespace

HandModel hand_model_from_json(const json& doc)
{
  try {
    Handedness handedness = Handedness::Right;
    if (doc.contains("handedness")) {
      const auto h = doc.at("handedness").get<std::string>();
      if (h == "left")
        handedness = Handedness::Left;
      else if (h != "right")
        throw InvalidInput("handedness must be \"left\" or \"right\"");
    }
    HandModel model{HandSkeleton::make_default(handedness), TriggerLayout::make_default()};
    if (handedness == Handedness::Left)
      model.triggers.palm_center.y = -model.triggers.palm_center.y;

    if (doc.contains("phalanx_radius"))
      model.skeleton.phalanx_radius = doc.at("phalanx_radius").get<double>();
    if (doc.contains("palm_frame"))
      model.skeleton.palm_frame = read_transform(doc.at("palm_frame"));

    if (doc.contains("fingers")) {
      for (const auto& [name, spec] : doc.at("fingers").items()) {
        FingerChain& chain = model.skeleton.fingers[static_cast<int>(parse_finger(name))];
        if (spec.contains("joints")) {
          const json& joints = spec.at("joints");
          if (!joints.is_array() || joints.size() != kSegmentsPerFinger)
            throw InvalidInput("finger '" + name + "' must list exactly 3 joints");
          for (int k = 0; k < kSegmentsPerFinger; ++k) {
            const json& js = joints[k];
            JointSpec& j = chain.joints[k];
            if (js.contains("offset"))
              j.offset = read_vec3(js.at("offset"), "joint offset");
            if (js.contains("axis"))
              j.axis = normalized(read_vec3(js.at("axis"), "joint axis"));
            if (js.contains("range_deg")) {
              const json& r = js.at("range_deg");
              if (!r.is_array() || r.size() != 2)
                throw InvalidInput("range_deg must be [min, max]");
              j.min_angle = r[0].get<double>() * kDegToRad;
              j.max_angle = r[1].get<double>() * kDegToRad;
            }
          }
        }
        if (spec.contains("tip"))
          chain.tip = read_vec3(spec.at("tip"), "fingertip offset");
      }
    }

    if (doc.contains("triggers")) {
      const json& t = doc.at("triggers");
      for (auto& finger : model.triggers.capsules)
        for (auto& c : finger) {
          c.radius = t.value("capsule_radius", c.radius);
          c.start_fraction = t.value("start_fraction", c.start_fraction);
          c.end_fraction = t.value("end_fraction", c.end_fraction);
        }
      if (t.contains("palm_center"))
        model.triggers.palm_center = read_vec3(t.at("palm_center"), "palm_center");
      model.triggers.palm_radius = t.value("palm_radius", model.triggers.palm_radius);
    }

    model.skeleton.validate();
    model.triggers.validate();
    return model;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("hand config: ") + e.what());
  }
}

HandModel load_hand_model(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw LoadError("cannot open hand config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return hand_model_from_json(doc);
}

json hand_model_to_json(const HandModel& model)
{
  const HandSkeleton& s = model.skeleton;
  json fingers = json::object();
  for (Finger f : kAllFingers) {
    const FingerChain& c = s.chain(f);
    json joints = json::array();
    for (const JointSpec& j : c.joints)
      joints.push_back({{"offset", write_vec3(j.offset)},
                        {"axis", write_vec3(j.axis)},
                        {"range_deg", {j.min_angle / kDegToRad, j.max_angle / kDegToRad}}});
    fingers[std::string(finger_name(f))] = {{"joints", joints}, {"tip", write_vec3(c.tip)}};
  }
  const CapsuleTriggerSpec& c = model.triggers.capsules[0][0];
  const Quat& q = s.palm_frame.rotation;
  return {
      {"handedness", s.handedness == Handedness::Left ? "left" : "right"},
      {"phalanx_radius", s.phalanx_radius},
      {"palm_frame",
       {{"translation", write_vec3(s.palm_frame.translation)}, {"rotation", {q.w, q.x, q.y, q.z}}}},
      {"fingers", fingers},
      {"triggers",
       {{"capsule_radius", c.radius},
        {"start_fraction", c.start_fraction},
        {"end_fraction", c.end_fraction},
        {"palm_center", write_vec3(model.triggers.palm_center)},
        {"palm_radius", model.triggers.palm_radius}}},
  };
}

}  // namespace vgrasp
