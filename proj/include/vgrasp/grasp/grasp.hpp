#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vgrasp/geometry/queries.hpp"
#include "vgrasp/hand/hand.hpp"

namespace vgrasp {

// Blocked flags for every phalanx plus the palm overlap flag. Only middle and
// distal phalanges carry triggers, so proximal flags are never set.
struct PhalanxContactState
{
  BlockedSet blocked;
  bool palm = false;

  bool is_blocked(PhalanxId p) const { return blocked.test(p.index()); }
  // Throws InvalidInput for proximal phalanges.
  void set_blocked(PhalanxId p, bool value);

  bool thumb_mid() const { return is_blocked({Finger::Thumb, Segment::Middle}); }
  bool thumb_dist() const { return is_blocked({Finger::Thumb, Segment::Distal}); }
  bool index_mid() const { return is_blocked({Finger::Index, Segment::Middle}); }
  bool index_dist() const { return is_blocked({Finger::Index, Segment::Distal}); }
  bool middle_mid() const { return is_blocked({Finger::Middle, Segment::Middle}); }
  bool middle_dist() const { return is_blocked({Finger::Middle, Segment::Distal}); }

  bool operator==(const PhalanxContactState&) const = default;
};

// x = (th_ph, in_ph, mi_ph, palm)
struct GraspInputs
{
  bool th_ph = false;
  bool in_ph = false;
  bool mi_ph = false;
  bool palm = false;

  bool operator==(const GraspInputs&) const = default;
};

GraspInputs derive_inputs(const PhalanxContactState& state);

/// (th_ph or palm) and (in_ph or mi_ph)
constexpr bool grasp_decision(const GraspInputs& x)
{
  return (x.th_ph || x.palm) && (x.in_ph || x.mi_ph);
}

struct Holding
{
  ObjectId object;
  // Object pose relative to the palm at the grab instant.
  Transform attachment;
  double grabbed_at = 0.0;

  bool operator==(const Holding&) const = default;
};

struct GraspState
{
  std::optional<Holding> holding;
  std::optional<ObjectId> selected;
  double last_close_fraction = 0.0;

  bool is_holding() const { return holding.has_value(); }
  bool operator==(const GraspState&) const = default;
};

// Fixed-step simulation clock; time is derived from the frame counter so it
// never accumulates rounding drift.
struct TrialClock
{
  std::uint64_t frame = 0;
  double dt = 1.0 / 90.0;

  double time() const { return static_cast<double>(frame) * dt; }
  bool operator==(const TrialClock&) const = default;
};

enum class GraspEventKind : std::uint8_t { Grabbed, Released };

struct GraspEvent
{
  GraspEventKind kind = GraspEventKind::Grabbed;
  std::uint64_t frame = 0;
  double time = 0.0;
  ObjectId object;

  bool operator==(const GraspEvent&) const = default;
};

/// Among objects overlapping the palm sphere, the one whose pivot is nearest
/// the sphere center; ties go to the lowest id.
std::optional<ObjectId> select_nearest_object(const Sphere& palm_sphere,
                                              std::span<const PlacedMesh> scene);

/// Interaction manager. A trigger overlapping the target blocks its phalanx;
/// a blocked phalanx is released when reopening or when its trigger no longer
/// overlaps. With no target every flag clears. The palm flag passes through.
PhalanxContactState update_blocking(std::span<const WorldCapsuleTrigger> triggers,
                                    const PlacedMesh* target, const PhalanxContactState& previous,
                                    bool reopening);

struct GraspConfig
{
  HandSkeleton skeleton = HandSkeleton::make_default();
  TriggerLayout triggers = TriggerLayout::make_default();
  double dt = 1.0 / kDefaultFps;
  double smoothing_delta = kDefaultSmoothingDelta;
  // Bisection steps used to locate the first-contact instant inside a frame.
  int contact_refinement_steps = 40;
};

struct SessionState
{
  GraspState grasp;
  PhalanxContactState contacts;
  HandPose pose;
  TrialClock clock;
  // Current placement of every scene object; held objects follow the palm.
  std::vector<PlacedMesh> objects;

  const PlacedMesh* find(ObjectId id) const;
};

struct FrameInput
{
  Transform palm;
  CloseCommand command;
};

struct StepResult
{
  SessionState state;
  std::vector<GraspEvent> events;
};

/// Advances one fixed-dt frame: object selection (while free), trigger
/// placement, blocking update, blocked pose advance, grasp decision and
/// grab/release edges.
StepResult step_frame(const GraspConfig& config, const SessionState& state, const FrameInput& input);

SessionState make_session(const GraspConfig& config, std::vector<PlacedMesh> objects,
                          const Transform& palm);

}  // namespace vgrasp
