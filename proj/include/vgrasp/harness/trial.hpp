#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vgrasp/metrics/metrics.hpp"
#include "vgrasp/harness/scenario.hpp"

namespace vgrasp {

enum class TrialOutcome : std::uint8_t { Grasped, Timeout };

struct TrialResult
{
  std::size_t trial_index = 0;
  ObjectId object;
  std::string label;
  std::string group;
  Transform spawn_pose;
  TrialOutcome outcome = TrialOutcome::Timeout;
  // Present iff grasped.
  std::optional<double> grasp_time_s;
  std::optional<std::uint64_t> grasp_frame;
  HandErrorReport report;
  std::vector<ImpactRecord> impacts;
  std::vector<ContactPointRecord> contacts;
};

/// Spawns object `index` from its own RNG substream, plays the trajectory
/// through the grasp state machine at 1/fps and measures the hand at the
/// Grabbed frame. Runs until grasped or max_trial_seconds of simulated time.
TrialResult run_trial(const ScenarioConfig& cfg,
                      const std::vector<std::shared_ptr<const TriangleMesh>>& meshes,
                      std::size_t index);
TrialResult run_trial(const ScenarioConfig& cfg, std::size_t index);

/// Every object in list order. Trials run on up to `workers` threads (0 picks
/// the hardware concurrency); results come back sorted by trial index.
std::vector<TrialResult> run_scenario(const ScenarioConfig& cfg, unsigned workers = 0);

}  // namespace vgrasp
