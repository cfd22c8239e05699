#include <doctest.h>

#include <cmath>
#include <random>

#include "vgrasp/hand/hand_config.hpp"

using namespace vgrasp;

namespace {

HandPose random_pose(const HandSkeleton& skel, std::mt19937_64& gen)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HandPose pose = HandPose::open(skel);
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    const JointSpec& j = skel.joint(p);
    pose.angle(p) = j.min_angle + u(gen) * (j.max_angle - j.min_angle);
  }
  pose.palm = {Quat::from_axis_angle({u(gen) - 0.5, u(gen) - 0.5, u(gen) - 0.5}, 3 * u(gen)),
               {u(gen), u(gen), u(gen)}};
  return pose;
}

Vec3 tip_world(const HandSkeleton& skel, const PhalanxTransforms& frames, Finger f)
{
  return frames[PhalanxId{f, Segment::Distal}.index()].apply(skel.chain(f).tip);
}

}  // namespace

TEST_CASE("phalanx names round trip")
{
  for (int i = 0; i < kPhalanxCount; ++i) {
    const PhalanxId p = PhalanxId::from_index(i);
    CHECK(parse_phalanx(p.name()) == p);
  }
  CHECK(PhalanxId{Finger::Index, Segment::Middle}.name() == "index_mid");
  CHECK_THROWS_AS(parse_phalanx("wrist_mid"), InvalidInput);
  CHECK_THROWS_AS(parse_phalanx("index"), InvalidInput);
  const auto triggers = trigger_phalanges();
  for (const PhalanxId& p : triggers)
    CHECK(p.has_trigger());
}

TEST_CASE("default hand is valid for both hands")
{
  CHECK_NOTHROW(HandSkeleton::make_default(Handedness::Right).validate());
  CHECK_NOTHROW(HandSkeleton::make_default(Handedness::Left).validate());
  CHECK(HandSkeleton::make_default().longest_segment_length() == doctest::Approx(0.044));
}

TEST_CASE("forward kinematics preserves segment lengths")
{
  std::mt19937_64 gen(11);
  const HandSkeleton skel = HandSkeleton::make_default();
  for (int n = 0; n < 200; ++n) {
    const HandPose pose = random_pose(skel, gen);
    const PhalanxTransforms frames = forward_kinematics(skel, pose);
    for (Finger f : kAllFingers) {
      for (int k = 0; k + 1 < kSegmentsPerFinger; ++k) {
        const PhalanxId p{f, static_cast<Segment>(k)};
        const PhalanxId child{f, static_cast<Segment>(k + 1)};
        CHECK(distance(frames[p.index()].translation, frames[child.index()].translation) ==
              doctest::Approx(skel.segment_length(p)).epsilon(1e-12));
      }
      CHECK(distance(frames[PhalanxId{f, Segment::Distal}.index()].translation,
                     tip_world(skel, frames, f)) ==
            doctest::Approx(skel.segment_length({f, Segment::Distal})).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward kinematics rejects out-of-range angles")
{
  const HandSkeleton skel = HandSkeleton::make_default();
  HandPose pose = HandPose::open(skel);
  pose.angle({Finger::Ring, Segment::Middle}) = -0.1;
  CHECK_THROWS_AS(forward_kinematics(skel, pose), InvalidInput);
}

TEST_CASE("flexion curls toward the palmar side")
{
  const HandSkeleton skel = HandSkeleton::make_default();
  const HandPose open = HandPose::open(skel);
  const TriggerPlacement t0 = trigger_world_placement(skel, open, TriggerLayout::make_default());
  for (Finger f : kAllFingers) {
    HandPose bent = open;
    bent.angle({f, Segment::Proximal}) = 0.05;
    const Vec3 before = tip_world(skel, forward_kinematics(skel, open), f);
    const Vec3 after = tip_world(skel, forward_kinematics(skel, bent), f);
    CHECK(dot(after - before, t0.at({f, Segment::Distal}).palmar_normal) > 0.0);
  }
}

TEST_CASE("trigger placement geometry")
{
  std::mt19937_64 gen(12);
  const HandSkeleton skel = HandSkeleton::make_default();
  const TriggerLayout layout = TriggerLayout::make_default();
  const HandPose pose = random_pose(skel, gen);
  const PhalanxTransforms frames = forward_kinematics(skel, pose);
  const TriggerPlacement t = trigger_world_placement(skel, pose, layout);
  for (const WorldCapsuleTrigger& c : t.capsules) {
    const Vec3 origin = frames[c.phalanx.index()].translation;
    const Vec3 seg = frames[c.phalanx.index()].apply_vector(skel.segment_vector(c.phalanx));
    CHECK(distance(c.capsule.a, origin + seg * 0.1) < 1e-12);
    CHECK(distance(c.capsule.b, origin + seg * 0.9) < 1e-12);
    CHECK(distance(c.axis_center, origin + seg * 0.5) < 1e-12);
    CHECK(norm(c.palmar_normal) == doctest::Approx(1.0));
    CHECK(std::abs(dot(c.palmar_normal, seg)) < 1e-12);
    CHECK(distance(c.surface_center, c.axis_center + c.palmar_normal * skel.phalanx_radius) < 1e-12);
    CHECK(c.capsule.radius == layout.capsule(c.phalanx).radius);
  }
  CHECK(distance(t.palm.center, pose.palm.apply(layout.palm_center)) < 1e-12);
}

TEST_CASE("left hand mirrors the right hand")
{
  const HandSkeleton right = HandSkeleton::make_default(Handedness::Right);
  const HandSkeleton left = HandSkeleton::make_default(Handedness::Left);
  std::mt19937_64 gen(13);
  HandPose pose = random_pose(right, gen);
  pose.palm = Transform::identity();
  const auto fr = forward_kinematics(right, pose);
  const auto fl = forward_kinematics(left, pose);
  for (Finger f : kAllFingers) {
    const Vec3 a = tip_world(right, fr, f);
    const Vec3 b = tip_world(left, fl, f);
    CHECK(distance(Vec3{a.x, -a.y, a.z}, b) < 1e-12);
  }
}

TEST_CASE("blocked phalanx freezes itself and its ancestors")
{
  BlockedSet blocked;
  blocked.set(PhalanxId{Finger::Index, Segment::Distal}.index());
  blocked.set(PhalanxId{Finger::Ring, Segment::Middle}.index());
  const BlockedSet frozen = frozen_joints(blocked);
  CHECK(frozen.test(PhalanxId{Finger::Index, Segment::Proximal}.index()));
  CHECK(frozen.test(PhalanxId{Finger::Index, Segment::Middle}.index()));
  CHECK(frozen.test(PhalanxId{Finger::Index, Segment::Distal}.index()));
  CHECK(frozen.test(PhalanxId{Finger::Ring, Segment::Proximal}.index()));
  CHECK(frozen.test(PhalanxId{Finger::Ring, Segment::Middle}.index()));
  CHECK_FALSE(frozen.test(PhalanxId{Finger::Ring, Segment::Distal}.index()));
  CHECK(frozen.count() == 5);
}

TEST_CASE("advance_pose is rate limited and reaches its target")
{
  const HandSkeleton skel = HandSkeleton::make_default();
  const double dt = 1.0 / 90.0;
  const CloseCommand cmd{1.0, kDefaultCloseRate};
  HandPose pose = HandPose::open(skel);
  int frames = 0;
  for (; frames < 200; ++frames) {
    const HandPose next = advance_pose(skel, pose, cmd, dt, {});
    for (int i = 0; i < kPhalanxCount; ++i) {
      const PhalanxId p = PhalanxId::from_index(i);
      CHECK(next.angle(p) - pose.angle(p) <= kDefaultCloseRate * dt + 1e-15);
    }
    if (next == pose)
      break;
    pose = next;
  }
  // 90 degrees at pi rad/s takes 0.5 s = 45 frames.
  CHECK(frames == 45);
  CHECK(pose.angle({Finger::Middle, Segment::Distal}) == doctest::Approx(skel.joint({Finger::Middle, Segment::Distal}).max_angle));
  CHECK_THROWS_AS(advance_pose(skel, pose, {1.5, 1.0}, dt, {}), InvalidInput);
  CHECK_THROWS_AS(advance_pose(skel, pose, {0.5, 1.0}, 0.0, {}), InvalidInput);
}

TEST_CASE("blocked phalanx world transform holds while closing")
{
  std::mt19937_64 gen(14);
  std::uniform_int_distribution<int> pick(0, kTriggerCount - 1);
  const HandSkeleton skel = HandSkeleton::make_default();
  const auto triggers = trigger_phalanges();
  for (int n = 0; n < 200; ++n) {
    HandPose pose = random_pose(skel, gen);
    BlockedSet blocked;
    const PhalanxId p = triggers[pick(gen)];
    blocked.set(p.index());
    const HandPose next = advance_pose(skel, pose, {1.0, kDefaultCloseRate}, 1.0 / 90.0, blocked);
    const auto a = forward_kinematics(skel, pose)[p.index()];
    const auto b = forward_kinematics(skel, next)[p.index()];
    CHECK(a == b);
  }
}

TEST_CASE("frozen joints release when the command opens")
{
  const HandSkeleton skel = HandSkeleton::make_default();
  HandPose pose = HandPose::open(skel);
  const PhalanxId p{Finger::Index, Segment::Middle};
  pose.angle(p) = 1.0;
  BlockedSet blocked;
  blocked.set(p.index());
  const HandPose next = advance_pose(skel, pose, {0.0, kDefaultCloseRate}, 1.0 / 90.0, blocked);
  CHECK(next.angle(p) < 1.0);
}

TEST_CASE("smooth_deltas splits large jumps evenly")
{
  const HandSkeleton skel = HandSkeleton::make_default();
  const HandPose a = HandPose::open(skel);
  HandPose b = a;
  b.angle({Finger::Index, Segment::Proximal}) = 1.0;
  b.angle({Finger::Thumb, Segment::Distal}) = 0.3;
  b.palm.translation = {0.1, 0, 0};
  const double delta = 0.07;
  const auto steps = smooth_deltas(a, b, delta);
  CHECK(steps.size() == static_cast<std::size_t>(std::ceil(1.0 / delta)));
  CHECK(steps.back() == b);
  HandPose prev = a;
  for (const HandPose& s : steps) {
    for (int i = 0; i < kPhalanxCount; ++i) {
      const PhalanxId p = PhalanxId::from_index(i);
      CHECK(std::abs(s.angle(p) - prev.angle(p)) <= delta + 1e-12);
    }
    prev = s;
  }
  CHECK(smooth_deltas(a, a, delta).size() == 1);
  CHECK_THROWS_AS(smooth_deltas(a, b, 0.0), InvalidInput);
}

TEST_CASE("hand config JSON")
{
  SUBCASE("round trip preserves kinematics")
  {
    const HandModel model{HandSkeleton::make_default(), TriggerLayout::make_default()};
    const HandModel back = hand_model_from_json(hand_model_to_json(model));
    std::mt19937_64 gen(15);
    const HandPose pose = random_pose(model.skeleton, gen);
    const auto fa = forward_kinematics(model.skeleton, pose);
    const auto fb = forward_kinematics(back.skeleton, pose);
    for (int i = 0; i < kPhalanxCount; ++i)
      CHECK(distance(fa[i].translation, fb[i].translation) < 1e-12);
    CHECK(back.triggers.palm_radius == model.triggers.palm_radius);
  }
  SUBCASE("partial override")
  {
    const auto doc = nlohmann::json::parse(R"({"phalanx_radius": 0.009,
      "triggers": {"palm_radius": 0.05}})");
    const HandModel m = hand_model_from_json(doc);
    CHECK(m.skeleton.phalanx_radius == 0.009);
    CHECK(m.triggers.palm_radius == 0.05);
  }
  SUBCASE("invalid values rejected")
  {
    CHECK_THROWS_AS(hand_model_from_json(nlohmann::json::parse(R"({"handedness": "both"})")),
                    InvalidInput);
    CHECK_THROWS_AS(hand_model_from_json(nlohmann::json::parse(R"({"triggers": {"palm_radius": -1}})")),
                    InvalidInput);
    CHECK_THROWS_AS(
        hand_model_from_json(nlohmann::json::parse(R"({"fingers": {"index": {"joints": []}}})")),
        InvalidInput);
  }
}
