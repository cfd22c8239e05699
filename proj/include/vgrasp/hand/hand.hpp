#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vgrasp/geometry/math.hpp"
#include "vgrasp/geometry/queries.hpp"

namespace vgrasp {

enum class Finger : std::uint8_t { Thumb = 0, Index, Middle, Ring, Pinky };
enum class Segment : std::uint8_t { Proximal = 0, Middle, Distal };

inline constexpr int kFingerCount = 5;
inline constexpr int kSegmentsPerFinger = 3;
inline constexpr int kPhalanxCount = kFingerCount * kSegmentsPerFinger;
// Capsule triggers per finger (middle + distal phalanx).
inline constexpr int kTriggersPerFinger = 2;
inline constexpr int kTriggerCount = kFingerCount * kTriggersPerFinger;

inline constexpr std::array<Finger, kFingerCount> kAllFingers = {
    Finger::Thumb, Finger::Index, Finger::Middle, Finger::Ring, Finger::Pinky};

struct PhalanxId
{
  Finger finger = Finger::Thumb;
  Segment segment = Segment::Proximal;

  constexpr bool operator==(const PhalanxId&) const = default;

  constexpr int index() const
  {
    return static_cast<int>(finger) * kSegmentsPerFinger + static_cast<int>(segment);
  }
  static constexpr PhalanxId from_index(int i)
  {
    return {static_cast<Finger>(i / kSegmentsPerFinger), static_cast<Segment>(i % kSegmentsPerFinger)};
  }
  constexpr bool has_trigger() const { return segment != Segment::Proximal; }

  // "index_mid", "thumb_dist", "ring_prox"
  std::string name() const;
};

std::string_view finger_name(Finger f);
std::string_view segment_name(Segment s);
Finger parse_finger(std::string_view name);
PhalanxId parse_phalanx(std::string_view name);

// The ten trigger-carrying phalanges in canonical order (finger-major, middle before distal).
std::array<PhalanxId, kTriggerCount> trigger_phalanges();

using BlockedSet = std::bitset<kPhalanxCount>;

struct JointSpec
{
  // Joint origin in the parent frame (palm frame for the first joint).
  Vec3 offset;
  // Flexion axis in the joint's own frame.
  Vec3 axis{0, 1, 0};
  double min_angle = 0.0;
  double max_angle = 0.0;
};

struct FingerChain
{
  std::array<JointSpec, kSegmentsPerFinger> joints;
  // Fingertip offset in the distal phalanx frame.
  Vec3 tip;
};

enum class Handedness : std::uint8_t { Right, Left };

// Articulated hand: five 3-joint flexion chains rooted at the palm frame.
//
// Phalanx k of a finger spans from joint k's origin to joint k+1's origin
// (or the fingertip). Its palmar direction is axis x longitudinal, the side
// toward which flexion curls the chain.
struct HandSkeleton
{
  std::array<FingerChain, kFingerCount> fingers;
  Transform palm_frame;
  Handedness handedness = Handedness::Right;
  // Radius of the cylindrical phalanx proxy; capsule trigger centers sit on it.
  double phalanx_radius = 0.007;

  const FingerChain& chain(Finger f) const { return fingers[static_cast<int>(f)]; }
  const JointSpec& joint(PhalanxId p) const
  {
    return chain(p.finger).joints[static_cast<int>(p.segment)];
  }
  // Joint-to-next-joint vector in the phalanx's own frame.
  Vec3 segment_vector(PhalanxId p) const;
  double segment_length(PhalanxId p) const { return norm(segment_vector(p)); }
  double longest_segment_length() const;
  // Unit palmar normal of a phalanx in its own frame.
  Vec3 palmar_normal(PhalanxId p) const;

  void validate() const;

  static HandSkeleton make_default(Handedness handedness = Handedness::Right);
};

struct HandPose
{
  std::array<std::array<double, kSegmentsPerFinger>, kFingerCount> angles{};
  Transform palm;

  double angle(PhalanxId p) const
  {
    return angles[static_cast<int>(p.finger)][static_cast<int>(p.segment)];
  }
  double& angle(PhalanxId p)
  {
    return angles[static_cast<int>(p.finger)][static_cast<int>(p.segment)];
  }
  bool operator==(const HandPose&) const = default;

  // Every joint at its minimum angle.
  static HandPose open(const HandSkeleton& skel, const Transform& palm = Transform::identity());
};

struct CapsuleTriggerSpec
{
  // Capsule spans [start, end] as fractions of the phalanx segment.
  double start_fraction = 0.1;
  double end_fraction = 0.9;
  double radius = 0.007;
};

struct TriggerLayout
{
  // [finger][0] = middle phalanx, [finger][1] = distal phalanx.
  std::array<std::array<CapsuleTriggerSpec, kTriggersPerFinger>, kFingerCount> capsules{};
  // Palm sphere in the palm frame.
  Vec3 palm_center{0.05, 0.0, -0.045};
  double palm_radius = 0.06;

  const CapsuleTriggerSpec& capsule(PhalanxId p) const;
  void validate() const;

  static TriggerLayout make_default();
};

struct CloseCommand
{
  double close_fraction = 0.0;
  double max_rate = 0.0;  // rad/s

  void validate() const;
};

struct WorldCapsuleTrigger
{
  PhalanxId phalanx;
  Capsule capsule;
  // Capsule midpoint on the phalanx axis.
  Vec3 axis_center;
  // Trigger center on the phalanx surface proxy (CTc).
  Vec3 surface_center;
  // Unit palmar normal in world.
  Vec3 palmar_normal;
  double segment_length = 0.0;
};

struct TriggerPlacement
{
  std::array<WorldCapsuleTrigger, kTriggerCount> capsules;
  Sphere palm;

  const WorldCapsuleTrigger& at(PhalanxId p) const;
};

using PhalanxTransforms = std::array<Transform, kPhalanxCount>;

/// World transform of every phalanx frame (origin at its joint). Throws
/// InvalidInput when a joint angle lies outside its range.
PhalanxTransforms forward_kinematics(const HandSkeleton& skel, const HandPose& pose);

TriggerPlacement trigger_world_placement(const HandSkeleton& skel, const HandPose& pose,
                                         const TriggerLayout& layout);
TriggerPlacement trigger_world_placement(const HandSkeleton& skel, const PhalanxTransforms& frames,
                                         const Transform& palm, const TriggerLayout& layout);

/// Joints that must hold still given the blocked phalanges: a blocked phalanx
/// freezes its own joint and every ancestor joint in its chain, so its world
/// transform stays fixed while descendants may keep flexing.
BlockedSet frozen_joints(const BlockedSet& blocked);

/// One animation step toward the commanded close fraction, rate limited to
/// max_rate * dt per joint. Frozen joints hold while closing and are released
/// when the command opens below their current fraction.
HandPose advance_pose(const HandSkeleton& skel, const HandPose& pose, const CloseCommand& cmd,
                      double dt, const BlockedSet& blocked);

/// Interpolates large frame-to-frame joint jumps. Returns the minimal number
/// of evenly spaced poses ending exactly at `next` such that no joint moves by
/// more than max_delta between consecutive poses.
std::vector<HandPose> smooth_deltas(const HandPose& prev, const HandPose& next, double max_delta);

// Closing speed giving a full close of a 90 degree joint in 0.5 s.
inline constexpr double kDefaultCloseRate = 3.14159265358979323846;
inline constexpr double kDefaultFps = 90.0;
inline constexpr double kDefaultSmoothingDelta = 2.0 * kDefaultCloseRate / kDefaultFps;

}  // namespace vgrasp
