#include "vgrasp/metrics/metrics.hpp"

#include <cmath>
#include <string>

namespace vgrasp {

double nearest_distance(const Vec3& ip, const Vec3& sp, const Vec3& ctc)
{
  require_finite(ip, "impact point");
  require_finite(sp, "trace start");
  require_finite(ctc, "trigger center");
  const Vec3 d_ip = ip - sp;
  const Vec3 d_ctc = ctc - sp;
  const double axis_length = norm(d_ctc);
  if (!(axis_length > 0.0))
    throw InvalidInput("trigger center coincides with trace start");
  return dot(d_ip, d_ctc) / axis_length - axis_length;
}

double finger_error(std::span<const double> nds)
{
  if (nds.size() != kTriggersPerFinger)
    throw InvalidInput("finger error expects " + std::to_string(kTriggersPerFinger) +
                       " values, got " + std::to_string(nds.size()));
  double sum = 0.0;
  for (double nd : nds) {
    if (!std::isfinite(nd))
      throw InvalidInput("non-finite nearest distance");
    sum += std::abs(nd);
  }
  return sum / kTriggersPerFinger;
}

double hand_error(std::span<const FingerError> fingers)
{
  if (fingers.size() != kFingerCount)
    throw InvalidInput("hand error expects " + std::to_string(kFingerCount) + " fingers, got " +
                       std::to_string(fingers.size()));
  double sum = 0.0;
  for (const FingerError& f : fingers)
    sum += f.mean_abs_mm;
  return sum;
}

GraspMeasurement measure_grasp(const HandSkeleton& skel, const HandPose& pose,
                               const TriggerLayout& layout, const PlacedMesh& object,
                               double grasp_time, const MeasureOptions& options)
{
  const TriggerPlacement placement = trigger_world_placement(skel, pose, layout);
  const Transform to_local = object.pose.inverse();

  GraspMeasurement out;
  out.report.object = object.id;
  out.report.grasp_time = grasp_time;

  std::array<std::array<double, kTriggersPerFinger>, kFingerCount> nds{};
  bool any_hit = false;

  for (const WorldCapsuleTrigger& t : placement.capsules) {
    const int f = static_cast<int>(t.phalanx.finger);
    const int k = static_cast<int>(t.phalanx.segment) - 1;
    const Vec3 sp = t.axis_center;
    const double radius = options.trace_radius.value_or(t.capsule.radius);
    const auto hit = sphere_trace(sp, t.palmar_normal, radius,
                                  options.max_length_factor * t.segment_length, *object.mesh,
                                  object.pose);
    if (!hit) {
      out.report.missing_triggers.push_back(t.phalanx);
      continue;
    }
    any_hit = true;
    const double nd_mm = nearest_distance(hit->impact_point * kMillimetersPerMeter,
                                          sp * kMillimetersPerMeter,
                                          t.surface_center * kMillimetersPerMeter);
    nds[f][k] = nd_mm;
    out.report.fingers[f].abs_nd_mm[k] = std::abs(nd_mm);
    out.impacts.push_back({t.phalanx, sp, hit->impact_point, t.surface_center, nd_mm});
    out.contacts.push_back(
        {t.phalanx, hit->impact_point, to_local.apply(hit->impact_point), object.id});
  }

  for (int f = 0; f < kFingerCount; ++f) {
    out.report.fingers[f].finger = static_cast<Finger>(f);
    out.report.fingers[f].mean_abs_mm = finger_error(nds[f]);
  }
  if (any_hit)
    out.report.hand_error_mm = hand_error(out.report.fingers);
  return out;
}

}  // namespace vgrasp
