#include "vgrasp/harness/trial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vgrasp/grasp/grasp.hpp"

namespace vgrasp {

namespace {

GraspConfig grasp_config(const ScenarioConfig& cfg)
{
  GraspConfig g;
  g.skeleton = cfg.hand.skeleton;
  g.triggers = cfg.hand.triggers;
  g.dt = 1.0 / cfg.fps;
  g.smoothing_delta = 2.0 * cfg.close_rate / cfg.fps;
  return g;
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg,
                      const std::vector<std::shared_ptr<const TriangleMesh>>& meshes,
                      std::size_t index)
{
  Xoshiro256 rng = Xoshiro256::substream(cfg.seed, index);
  const PlacedMesh object = spawn_object(cfg, meshes, index, rng);
  const GraspConfig g = grasp_config(cfg);
  const Vec3 anchor = object.pose.translation;

  TrialResult result;
  result.trial_index = index;
  result.object = object.id;
  result.label = cfg.objects[index].label;
  result.group = cfg.group;
  result.spawn_pose = object.pose;
  result.report.object = object.id;

  SessionState state = make_session(g, {object}, sample_trajectory(cfg.trajectory, 0.0, anchor).palm);
  const auto max_frames =
      static_cast<std::uint64_t>(std::floor(cfg.max_trial_seconds * cfg.fps + 1e-9));

  for (std::uint64_t frame = 1; frame <= max_frames; ++frame) {
    const TrajectorySample s =
        sample_trajectory(cfg.trajectory, static_cast<double>(frame) * g.dt, anchor);
    StepResult step = step_frame(g, state, {s.palm, {s.close_fraction, cfg.close_rate}});
    state = std::move(step.state);
    for (const GraspEvent& e : step.events) {
      if (e.kind != GraspEventKind::Grabbed)
        continue;
      const PlacedMesh* held = state.find(e.object);
      GraspMeasurement m = measure_grasp(g.skeleton, state.pose, g.triggers, *held, e.time);
      result.outcome = TrialOutcome::Grasped;
      result.grasp_time_s = e.time;
      result.grasp_frame = e.frame;
      result.report = std::move(m.report);
      result.impacts = std::move(m.impacts);
      result.contacts = std::move(m.contacts);
      return result;
    }
  }
  return result;
}

TrialResult run_trial(const ScenarioConfig& cfg, std::size_t index)
{
  return run_trial(cfg, build_meshes(cfg), index);
}

std::vector<TrialResult> run_scenario(const ScenarioConfig& cfg, unsigned workers)
{
  cfg.validate();
  const auto meshes = build_meshes(cfg);
  const std::size_t n = cfg.objects.size();
  std::vector<TrialResult> results(n);

  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        results[i] = run_trial(cfg, meshes, i);
      } catch (...) {
        if (!failed.exchange(true))
          failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w)
      pool.emplace_back(work);
    work();
  }
  if (failure)
    std::rethrow_exception(failure);
  return results;
}

}  // namespace vgrasp
