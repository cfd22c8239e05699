#include "vgrasp/grasp/grasp.hpp"

#include <algorithm>
#include <bitset>

namespace vgrasp {

void PhalanxContactState::set_blocked(PhalanxId p, bool value)
{
  if (!p.has_trigger())
    throw InvalidInput(p.name() + " has no trigger and cannot be blocked");
  blocked.set(p.index(), value);
}

GraspInputs derive_inputs(const PhalanxContactState& s)
{
  return {s.thumb_mid() || s.thumb_dist(), s.index_mid() || s.index_dist(),
          s.middle_mid() || s.middle_dist(), s.palm};
}

std::optional<ObjectId> select_nearest_object(const Sphere& palm_sphere,
                                              std::span<const PlacedMesh> scene)
{
  std::optional<ObjectId> best;
  double best_d2 = 0.0;
  for (const OverlapEntry& e : sphere_overlap_points(palm_sphere, scene)) {
    const double d2 = squared_norm(e.world_location - palm_sphere.center);
    if (!best || d2 < best_d2 || (d2 == best_d2 && e.id < *best)) {
      best = e.id;
      best_d2 = d2;
    }
  }
  return best;
}

PhalanxContactState update_blocking(std::span<const WorldCapsuleTrigger> triggers,
                                    const PlacedMesh* target, const PhalanxContactState& previous,
                                    bool reopening)
{
  PhalanxContactState next = previous;
  for (const WorldCapsuleTrigger& t : triggers) {
    const bool overlapping =
        target != nullptr && capsule_overlaps_mesh(t.capsule, *target->mesh, target->pose);
    if (overlapping && !reopening)
      next.set_blocked(t.phalanx, true);
    else if (reopening || !overlapping)
      next.set_blocked(t.phalanx, false);
  }
  return next;
}

const PlacedMesh* SessionState::find(ObjectId id) const
{
  for (const auto& o : objects)
    if (o.id == id)
      return &o;
  return nullptr;
}

SessionState make_session(const GraspConfig& config, std::vector<PlacedMesh> objects,
                          const Transform& palm)
{
  config.skeleton.validate();
  config.triggers.validate();
  SessionState s;
  s.pose = HandPose::open(config.skeleton, palm);
  s.clock.dt = config.dt;
  s.objects = std::move(objects);
  return s;
}

namespace {

PlacedMesh* find_mutable(SessionState& s, ObjectId id)
{
  for (auto& o : s.objects)
    if (o.id == id)
      return &o;
  return nullptr;
}

void blend_finger(HandPose& out, const HandPose& from, const HandPose& to, int finger, double t)
{
  for (int k = 0; k < kSegmentsPerFinger; ++k) {
    const double a = from.angles[finger][k];
    const double b = to.angles[finger][k];
    out.angles[finger][k] = t >= 1.0 ? b : a + (b - a) * t;
  }
}

// Unblocked triggers of `finger` that overlap the target at `pose`.
std::bitset<kTriggersPerFinger> new_contacts(const GraspConfig& cfg, const HandPose& pose,
                                             int finger, const PlacedMesh& target,
                                             const PhalanxContactState& contacts)
{
  const PhalanxTransforms frames = forward_kinematics(cfg.skeleton, pose);
  const TriggerPlacement placement =
      trigger_world_placement(cfg.skeleton, frames, pose.palm, cfg.triggers);
  std::bitset<kTriggersPerFinger> hits;
  for (int k = 0; k < kTriggersPerFinger; ++k) {
    const WorldCapsuleTrigger& t = placement.capsules[finger * kTriggersPerFinger + k];
    if (contacts.is_blocked(t.phalanx))
      continue;
    if (capsule_overlaps_mesh(t.capsule, *target.mesh, target.pose))
      hits.set(k);
  }
  return hits;
}

// Closes the fingers toward `goal`, stopping each finger at the instant one of
// its free triggers first touches the target and blocking that phalanx.
HandPose close_with_contacts(const GraspConfig& cfg, const HandPose& start, const HandPose& goal,
                             const PlacedMesh& target, PhalanxContactState& contacts)
{
  HandPose current = start;
  std::bitset<kFingerCount> stopped;
  for (const HandPose& sub : smooth_deltas(start, goal, cfg.smoothing_delta)) {
    HandPose next = current;
    next.palm = sub.palm;
    for (int f = 0; f < kFingerCount; ++f)
      if (!stopped.test(f))
        next.angles[f] = sub.angles[f];

    for (int f = 0; f < kFingerCount; ++f) {
      if (stopped.test(f) || next.angles[f] == current.angles[f])
        continue;
      auto hits = new_contacts(cfg, next, f, target, contacts);
      if (hits.none())
        continue;
      double lo = 0.0;
      double hi = 1.0;
      HandPose probe = next;
      for (int it = 0; it < cfg.contact_refinement_steps; ++it) {
        const double mid = 0.5 * (lo + hi);
        blend_finger(probe, current, next, f, mid);
        if (new_contacts(cfg, probe, f, target, contacts).any())
          hi = mid;
        else
          lo = mid;
      }
      blend_finger(next, current, next, f, hi);
      hits = new_contacts(cfg, next, f, target, contacts);
      for (int k = 0; k < kTriggersPerFinger; ++k)
        if (hits.test(k))
          contacts.set_blocked({static_cast<Finger>(f), static_cast<Segment>(k + 1)}, true);
      stopped.set(f);
    }
    current = next;
  }
  current.palm = goal.palm;
  return current;
}

}  // namespace

StepResult step_frame(const GraspConfig& cfg, const SessionState& state, const FrameInput& input)
{
  input.command.validate();
  input.palm.validate("palm transform");

  StepResult result{state, {}};
  SessionState& s = result.state;
  s.clock.dt = cfg.dt;
  s.clock.frame += 1;
  const double now = s.clock.time();
  s.pose.palm = input.palm;

  if (s.grasp.holding) {
    PlacedMesh* held = find_mutable(s, s.grasp.holding->object);
    held->pose = input.palm * s.grasp.holding->attachment;
    held->pose.rotation = held->pose.rotation.normalized();
  }

  const TriggerPlacement triggers = trigger_world_placement(cfg.skeleton, s.pose, cfg.triggers);

  if (!s.grasp.holding)
    s.grasp.selected = select_nearest_object(triggers.palm, s.objects);
  const PlacedMesh* target = s.grasp.selected ? s.find(*s.grasp.selected) : nullptr;

  const bool reopening = input.command.close_fraction < s.grasp.last_close_fraction;
  s.contacts = update_blocking(triggers.capsules, target, s.contacts, reopening);
  s.contacts.palm =
      target != nullptr && sphere_overlaps_mesh(triggers.palm, *target->mesh, target->pose);

  const HandPose goal = advance_pose(cfg.skeleton, s.pose, input.command, cfg.dt, s.contacts.blocked);
  if (target != nullptr && !reopening)
    s.pose = close_with_contacts(cfg, s.pose, goal, *target, s.contacts);
  else
    s.pose = goal;

  const bool decision = target != nullptr && grasp_decision(derive_inputs(s.contacts));
  if (decision && !s.grasp.holding) {
    s.grasp.holding = Holding{target->id, input.palm.inverse() * target->pose, now};
    result.events.push_back({GraspEventKind::Grabbed, s.clock.frame, now, target->id});
  } else if (!decision && s.grasp.holding) {
    result.events.push_back({GraspEventKind::Released, s.clock.frame, now, s.grasp.holding->object});
    s.grasp.holding.reset();
  }
  s.grasp.last_close_fraction = input.command.close_fraction;
  return result;
}

}  // namespace vgrasp
