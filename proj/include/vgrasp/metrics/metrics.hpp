#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "vgrasp/geometry/queries.hpp"
#include "vgrasp/hand/hand.hpp"

namespace vgrasp {

inline constexpr double kMillimetersPerMeter = 1000.0;

struct ImpactRecord
{
  PhalanxId phalanx;
  // World frame, meters.
  Vec3 sp;
  Vec3 ip;
  Vec3 ctc;
  double nd_mm = 0.0;
};

struct FingerError
{
  Finger finger = Finger::Thumb;
  // |ND| of the middle and distal trigger; absent when the trace missed.
  std::array<std::optional<double>, kTriggersPerFinger> abs_nd_mm{};
  double mean_abs_mm = 0.0;
};

struct HandErrorReport
{
  ObjectId object;
  double grasp_time = 0.0;
  std::array<FingerError, kFingerCount> fingers{};
  // Absent when no trigger trace hit the object.
  std::optional<double> hand_error_mm;
  std::vector<PhalanxId> missing_triggers;
};

struct ContactPointRecord
{
  PhalanxId phalanx;
  Vec3 point_world;
  Vec3 point_object_local;
  ObjectId object;
};

struct GraspMeasurement
{
  HandErrorReport report;
  std::vector<ImpactRecord> impacts;
  std::vector<ContactPointRecord> contacts;
};

/// Signed distance from the impact point to the plane through the capsule
/// trigger center perpendicular to the trace axis:
///   ((Ip - Sp) . (CTc - Sp)) / |CTc - Sp| - |CTc - Sp|
/// Positive when the finger stopped above the surface, negative on
/// penetration. Units are those of the inputs. Throws InvalidInput if CTc == Sp.
double nearest_distance(const Vec3& ip, const Vec3& sp, const Vec3& ctc);

/// Mean absolute value over the triggers of one finger. Requires exactly
/// kTriggersPerFinger entries.
double finger_error(std::span<const double> nds);

/// Sum of per-finger mean |ND|. Requires exactly kFingerCount entries.
double hand_error(std::span<const FingerError> fingers);

struct MeasureOptions
{
  // Sphere trace radius; defaults to each trigger's capsule radius.
  std::optional<double> trace_radius;
  // Trace length as a multiple of the phalanx segment length.
  double max_length_factor = 3.0;
};

/// Throws a sphere trace per capsule trigger from the phalanx axis through
/// the trigger center along the palmar normal, and aggregates the hits into
/// the hand error. Triggers whose trace misses contribute nothing to their
/// finger's sum; the divisor stays kTriggersPerFinger.
GraspMeasurement measure_grasp(const HandSkeleton& skel, const HandPose& pose,
                               const TriggerLayout& layout, const PlacedMesh& object,
                               double grasp_time = 0.0, const MeasureOptions& options = {});

}  // namespace vgrasp
