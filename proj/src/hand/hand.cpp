#include "vgrasp/hand/hand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vgrasp {

namespace {

constexpr std::array<std::string_view, kFingerCount> kFingerNames = {"thumb", "index", "middle",
                                                                     "ring", "pinky"};
constexpr std::array<std::string_view, kSegmentsPerFinger> kSegmentNames = {"prox", "mid", "dist"};

constexpr double kAngleSlack = 1e-12;

}  // namespace

std::string_view finger_name(Finger f) { return kFingerNames[static_cast<int>(f)]; }
std::string_view segment_name(Segment s) { return kSegmentNames[static_cast<int>(s)]; }

std::string PhalanxId::name() const
{
  return std::string(finger_name(finger)) + "_" + std::string(segment_name(segment));
}

Finger parse_finger(std::string_view name)
{
  for (int i = 0; i < kFingerCount; ++i)
    if (kFingerNames[i] == name)
      return static_cast<Finger>(i);
  throw InvalidInput("unknown finger '" + std::string(name) + "'");
}

PhalanxId parse_phalanx(std::string_view name)
{
  const auto sep = name.find('_');
  if (sep == std::string_view::npos)
    throw InvalidInput("malformed phalanx name '" + std::string(name) + "'");
  const Finger f = parse_finger(name.substr(0, sep));
  const auto seg = name.substr(sep + 1);
  for (int i = 0; i < kSegmentsPerFinger; ++i)
    if (kSegmentNames[i] == seg)
      return {f, static_cast<Segment>(i)};
  throw InvalidInput("unknown phalanx segment '" + std::string(seg) + "'");
}

std::array<PhalanxId, kTriggerCount> trigger_phalanges()
{
  std::array<PhalanxId, kTriggerCount> out;
  for (int f = 0; f < kFingerCount; ++f) {
    out[2 * f] = {static_cast<Finger>(f), Segment::Middle};
    out[2 * f + 1] = {static_cast<Finger>(f), Segment::Distal};
  }
  return out;
}

Vec3 HandSkeleton::segment_vector(PhalanxId p) const
{
  const FingerChain& c = chain(p.finger);
  const int k = static_cast<int>(p.segment);
  return k + 1 < kSegmentsPerFinger ? c.joints[k + 1].offset : c.tip;
}

double HandSkeleton::longest_segment_length() const
{
  double longest = 0.0;
  for (int i = 0; i < kPhalanxCount; ++i)
    longest = std::max(longest, segment_length(PhalanxId::from_index(i)));
  return longest;
}

Vec3 HandSkeleton::palmar_normal(PhalanxId p) const
{
  return normalized(cross(normalized(joint(p).axis), normalized(segment_vector(p))));
}

void HandSkeleton::validate() const
{
  palm_frame.validate("palm frame");
  if (!(phalanx_radius > 0.0) || !std::isfinite(phalanx_radius))
    throw InvalidInput("phalanx radius must be positive");
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    const JointSpec& j = joint(p);
    require_finite(j.offset, "joint offset");
    require_finite(j.axis, "joint axis");
    if (std::abs(norm(j.axis) - 1.0) > 1e-9)
      throw InvalidInput(p.name() + ": flexion axis must be unit length");
    if (!(j.min_angle < j.max_angle) || !std::isfinite(j.min_angle) || !std::isfinite(j.max_angle))
      throw InvalidInput(p.name() + ": joint range must satisfy min < max");
    const Vec3 seg = segment_vector(p);
    require_finite(seg, "segment vector");
    if (!(norm(seg) > 1e-6))
      throw InvalidInput(p.name() + ": phalanx segment has zero length");
    if (norm(cross(j.axis, normalized(seg))) < 1e-6)
      throw InvalidInput(p.name() + ": flexion axis parallel to phalanx");
  }
}

HandSkeleton HandSkeleton::make_default(Handedness handedness)
{
  constexpr double kFingerMax = std::numbers::pi / 2.0;
  constexpr double kThumbMax = std::numbers::pi / 3.0;

  struct Layout
  {
    Vec3 root;
    Vec3 direction;
    Vec3 axis;
    std::array<double, 3> lengths;
    double max_angle;
  };
  // Right hand in the palm frame: +x toward the fingers, +y toward the
  // thumb, +z out of the back of the hand. The thumb points forward and
  // outward and curls toward the grasp region in front of the palm.
  const Vec3 thumb_root{0.005, 0.040, -0.015};
  const Vec3 thumb_dir = normalized(Vec3{0.6, 0.8, 0.0});
  const Vec3 grasp_point{0.050, 0.0, -0.045};
  const Vec3 thumb_axis = normalized(cross(thumb_dir, grasp_point - thumb_root));
  const std::array<Layout, kFingerCount> layout = {{
      {thumb_root, thumb_dir, thumb_axis, {0.036, 0.030, 0.026}, kThumbMax},
      {{0.045, 0.026, 0.0}, {1, 0, 0}, {0, 1, 0}, {0.040, 0.024, 0.020}, kFingerMax},
      {{0.047, 0.008, 0.0}, {1, 0, 0}, {0, 1, 0}, {0.044, 0.027, 0.021}, kFingerMax},
      {{0.045, -0.010, 0.0}, {1, 0, 0}, {0, 1, 0}, {0.041, 0.025, 0.020}, kFingerMax},
      {{0.040, -0.027, 0.0}, {1, 0, 0}, {0, 1, 0}, {0.033, 0.019, 0.018}, kFingerMax},
  }};

  HandSkeleton skel;
  skel.handedness = handedness;
  const bool mirror = handedness == Handedness::Left;
  // Reflection y -> -y; axes are pseudo-vectors and pick up a sign.
  auto point = [&](Vec3 v) { return mirror ? Vec3{v.x, -v.y, v.z} : v; };
  auto axis = [&](Vec3 v) { return mirror ? Vec3{-v.x, v.y, -v.z} : v; };

  for (int f = 0; f < kFingerCount; ++f) {
    const Layout& l = layout[f];
    FingerChain& chain = skel.fingers[f];
    const Vec3 dir = point(l.direction);
    for (int k = 0; k < kSegmentsPerFinger; ++k) {
      JointSpec& j = chain.joints[k];
      j.offset = k == 0 ? point(l.root) : dir * l.lengths[k - 1];
      j.axis = axis(l.axis);
      j.min_angle = 0.0;
      j.max_angle = l.max_angle;
    }
    chain.tip = dir * l.lengths[2];
  }
  return skel;
}

HandPose HandPose::open(const HandSkeleton& skel, const Transform& palm)
{
  HandPose pose;
  pose.palm = palm;
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    pose.angle(p) = skel.joint(p).min_angle;
  }
  return pose;
}

const CapsuleTriggerSpec& TriggerLayout::capsule(PhalanxId p) const
{
  if (!p.has_trigger())
    throw InvalidInput(p.name() + " carries no capsule trigger");
  return capsules[static_cast<int>(p.finger)][static_cast<int>(p.segment) - 1];
}

void TriggerLayout::validate() const
{
  for (const auto& finger : capsules)
    for (const auto& c : finger) {
      if (!(c.radius > 0.0) || !std::isfinite(c.radius))
        throw InvalidInput("capsule trigger radius must be positive");
      if (!(0.0 <= c.start_fraction && c.start_fraction < c.end_fraction && c.end_fraction <= 1.0))
        throw InvalidInput("capsule trigger fractions must satisfy 0 <= start < end <= 1");
    }
  require_finite(palm_center, "palm trigger center");
  if (!(palm_radius > 0.0) || !std::isfinite(palm_radius))
    throw InvalidInput("palm trigger radius must be positive");
}

TriggerLayout TriggerLayout::make_default() { return TriggerLayout{}; }

void CloseCommand::validate() const
{
  if (!(close_fraction >= 0.0 && close_fraction <= 1.0))
    throw InvalidInput("close fraction must lie in [0, 1]");
  if (!(max_rate > 0.0) || !std::isfinite(max_rate))
    throw InvalidInput("close rate must be positive");
}

const WorldCapsuleTrigger& TriggerPlacement::at(PhalanxId p) const
{
  if (!p.has_trigger())
    throw InvalidInput(p.name() + " carries no capsule trigger");
  return capsules[static_cast<int>(p.finger) * kTriggersPerFinger + static_cast<int>(p.segment) - 1];
}

PhalanxTransforms forward_kinematics(const HandSkeleton& skel, const HandPose& pose)
{
  pose.palm.validate("palm transform");
  const Transform base = pose.palm * skel.palm_frame;
  PhalanxTransforms out;
  for (int f = 0; f < kFingerCount; ++f) {
    Transform t = base;
    for (int k = 0; k < kSegmentsPerFinger; ++k) {
      const PhalanxId p{static_cast<Finger>(f), static_cast<Segment>(k)};
      const JointSpec& j = skel.joint(p);
      const double theta = pose.angle(p);
      if (!(theta >= j.min_angle - kAngleSlack && theta <= j.max_angle + kAngleSlack))
        throw InvalidInput(p.name() + ": joint angle outside its range");
      t = t * Transform{Quat::from_axis_angle(j.axis, theta), j.offset};
      t.rotation = t.rotation.normalized();
      out[p.index()] = t;
    }
  }
  return out;
}

TriggerPlacement trigger_world_placement(const HandSkeleton& skel, const PhalanxTransforms& frames,
                                         const Transform& palm, const TriggerLayout& layout)
{
  TriggerPlacement out;
  const auto ids = trigger_phalanges();
  for (int i = 0; i < kTriggerCount; ++i) {
    const PhalanxId p = ids[i];
    const Transform& frame = frames[p.index()];
    const CapsuleTriggerSpec& spec = layout.capsule(p);
    const Vec3 seg = skel.segment_vector(p);
    WorldCapsuleTrigger& trig = out.capsules[i];
    trig.phalanx = p;
    trig.capsule = {frame.apply(seg * spec.start_fraction), frame.apply(seg * spec.end_fraction),
                    spec.radius};
    trig.axis_center = frame.apply(seg * (0.5 * (spec.start_fraction + spec.end_fraction)));
    trig.palmar_normal = frame.apply_vector(skel.palmar_normal(p));
    trig.surface_center = trig.axis_center + trig.palmar_normal * skel.phalanx_radius;
    trig.segment_length = norm(seg);
  }
  out.palm = {(palm * skel.palm_frame).apply(layout.palm_center), layout.palm_radius};
  return out;
}

TriggerPlacement trigger_world_placement(const HandSkeleton& skel, const HandPose& pose,
                                         const TriggerLayout& layout)
{
  return trigger_world_placement(skel, forward_kinematics(skel, pose), pose.palm, layout);
}

BlockedSet frozen_joints(const BlockedSet& blocked)
{
  BlockedSet frozen;
  for (int f = 0; f < kFingerCount; ++f) {
    bool any = false;
    for (int k = kSegmentsPerFinger - 1; k >= 0; --k) {
      any = any || blocked.test(f * kSegmentsPerFinger + k);
      frozen.set(f * kSegmentsPerFinger + k, any);
    }
  }
  return frozen;
}

HandPose advance_pose(const HandSkeleton& skel, const HandPose& pose, const CloseCommand& cmd,
                      double dt, const BlockedSet& blocked)
{
  cmd.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidInput("time step must be positive");
  const BlockedSet frozen = frozen_joints(blocked);
  const double max_step = cmd.max_rate * dt;
  HandPose next = pose;
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    const JointSpec& j = skel.joint(p);
    const double current = pose.angle(p);
    const double target = j.min_angle + cmd.close_fraction * (j.max_angle - j.min_angle);
    if (frozen.test(i) && target >= current)
      continue;
    const double step = std::clamp(target - current, -max_step, max_step);
    next.angle(p) = std::clamp(current + step, j.min_angle, j.max_angle);
  }
  return next;
}

std::vector<HandPose> smooth_deltas(const HandPose& prev, const HandPose& next, double max_delta)
{
  if (!(max_delta > 0.0) || !std::isfinite(max_delta))
    throw InvalidInput("smoothing delta must be positive");
  double largest = 0.0;
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    largest = std::max(largest, std::abs(next.angle(p) - prev.angle(p)));
  }
  if (largest <= max_delta)
    return {next};

  const auto steps = static_cast<int>(std::ceil(largest / max_delta));
  std::vector<HandPose> out;
  out.reserve(steps);
  for (int s = 1; s < steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    HandPose h;
    for (int i = 0; i < kPhalanxCount; ++i) {
      const PhalanxId p = PhalanxId::from_index(i);
      h.angle(p) = prev.angle(p) + (next.angle(p) - prev.angle(p)) * t;
    }
    h.palm = {slerp(prev.palm.rotation, next.palm.rotation, t),
              lerp(prev.palm.translation, next.palm.translation, t)};
    out.push_back(h);
  }
  out.push_back(next);
  return out;
}

}  // namespace vgrasp
