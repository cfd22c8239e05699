#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vgrasp/hand/hand.hpp"

namespace vgrasp {

struct HandModel
{
  HandSkeleton skeleton;
  TriggerLayout triggers;
};

/// Builds a hand from a JSON document (schema in docs/hand_config.md). Every
/// field is optional and falls back to the default hand of the requested
/// handedness.
HandModel hand_model_from_json(const nlohmann::json& doc);
HandModel load_hand_model(const std::filesystem::path& path);

nlohmann::json hand_model_to_json(const HandModel& model);

}  // namespace vgrasp
