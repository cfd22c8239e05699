#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "vgrasp/harness/aggregate.hpp"
#include "vgrasp/harness/questionnaire.hpp"
#include "vgrasp/harness/report_io.hpp"
#include "vgrasp/harness/rng.hpp"
#include "vgrasp/harness/scenario.hpp"
#include "vgrasp/harness/trial.hpp"

using namespace vgrasp;

namespace {

nlohmann::json scenario_doc(int objects)
{
  nlohmann::json objs = nlohmann::json::array();
  for (int i = 0; i < objects; ++i)
    objs.push_back({{"label", "ball"}, {"sphere", {{"radius", 0.03}, {"subdivisions", 2}}}});
  auto palm = [](double z) {
    return nlohmann::json{{"translation", {-0.05, 0.0, z}}, {"rotation", {1, 0, 0, 0}}};
  };
  return {{"seed", 99},
          {"group", "test"},
          {"max_trial_seconds", 3},
          {"spawn_region", {{"min", {-0.1, -0.1, 0}}, {"max", {0.1, 0.1, 0.1}}}},
          {"objects", objs},
          {"trajectory",
           {{{"t", 0.0}, {"space", "object"}, {"palm", palm(0.2)}, {"close", 0.0}},
            {{"t", 0.5}, {"space", "object"}, {"palm", palm(0.045)}, {"close", 0.0}},
            {{"t", 1.2}, {"space", "object"}, {"palm", palm(0.045)}, {"close", 1.0}}}}};
}

QuestionnaireResponse response(std::array<int, 14> a)
{
  QuestionnaireResponse r;
  r.answers = a;
  return r;
}

TrialResult fake(std::uint32_t object, std::string group, std::optional<double> time,
                 std::optional<double> error)
{
  TrialResult r;
  r.object = ObjectId{object};
  r.group = std::move(group);
  r.outcome = time ? TrialOutcome::Grasped : TrialOutcome::Timeout;
  r.grasp_time_s = time;
  r.report.hand_error_mm = error;
  return r;
}

}  // namespace

TEST_CASE("xoshiro256** reference vectors")
{
  // Generated by an independent Python implementation (docs/rng.md).
  Xoshiro256 zero(0);
  CHECK(zero.next() == 0x99ec5f36cb75f2b4ull);
  CHECK(zero.next() == 0xbf6e1f784956452aull);
  CHECK(zero.next() == 0x1a5f849d4933e6e0ull);
  Xoshiro256 g(42);
  CHECK(g.next() == 0x15780b2e0c2ec716ull);
  CHECK(g.next() == 0x6104d9866d113a7eull);
  Xoshiro256 u(42);
  CHECK(u.uniform() == 0.08386297105988216);
  CHECK(u.uniform() == 0.3789802506626686);
  Xoshiro256 sub = Xoshiro256::substream(42, 7);
  CHECK(sub.next() == 0x24bfb39aeb008c15ull);
  Xoshiro256 top(0xFFFFFFFFFFFFFFFFull);
  CHECK(top.next() == 0x8f5520d52a7ead08ull);
}

TEST_CASE("bounded draws stay in range and cover it")
{
  Xoshiro256 g(5);
  std::array<int, 7> counts{};
  for (int i = 0; i < 7000; ++i)
    ++counts[g.below(7)];
  for (int c : counts)
    CHECK(c > 800);
  CHECK_THROWS_AS(g.below(0), InvalidInput);
}

TEST_CASE("uniform rotations have the moments of the Haar measure")
{
  // For uniform unit quaternions E[q_i] = 0, E[q_i q_j] = delta_ij / 4.
  Xoshiro256 g(17);
  const int n = 100000;
  std::array<double, 4> mean{};
  std::array<std::array<double, 4>, 4> cov{};
  for (int i = 0; i < n; ++i) {
    const double u1 = g.uniform(), u2 = g.uniform(), u3 = g.uniform();
    const Quat q = uniform_rotation(u1, u2, u3);
    const std::array<double, 4> c{q.w, q.x, q.y, q.z};
    CHECK(std::abs(q.norm() - 1.0) < 1e-12);
    for (int a = 0; a < 4; ++a) {
      mean[a] += c[a] / n;
      for (int b = 0; b < 4; ++b)
        cov[a][b] += c[a] * c[b] / n;
    }
  }
  // Standard error of each moment is below 0.002 at this sample size.
  for (int a = 0; a < 4; ++a) {
    CHECK(std::abs(mean[a]) < 0.01);
    for (int b = 0; b < 4; ++b)
      CHECK(std::abs(cov[a][b] - (a == b ? 0.25 : 0.0)) < 0.01);
  }
}

TEST_CASE("spawning is deterministic and inside the region")
{
  const ScenarioConfig cfg = scenario_from_json(scenario_doc(5));
  const auto meshes = build_meshes(cfg);
  for (std::size_t i = 0; i < 5; ++i) {
    Xoshiro256 a = Xoshiro256::substream(cfg.seed, i), b = Xoshiro256::substream(cfg.seed, i);
    const PlacedMesh pa = spawn_object(cfg, meshes, i, a);
    const PlacedMesh pb = spawn_object(cfg, meshes, i, b);
    CHECK(pa.pose == pb.pose);
    const Vec3 p = pa.pivot();
    CHECK((p.x >= -0.1 && p.x < 0.1 && p.y >= -0.1 && p.y < 0.1 && p.z >= 0 && p.z < 0.1));
    // Six draws consumed.
    Xoshiro256 c = Xoshiro256::substream(cfg.seed, i);
    for (int k = 0; k < 6; ++k)
      c.next();
    CHECK(a.next() == c.next());
  }
  Xoshiro256 g(0);
  CHECK_THROWS_AS(spawn_object(cfg, meshes, 5, g), InvalidInput);
}

TEST_CASE("scenario validation")
{
  auto doc = scenario_doc(1);
  SUBCASE("degenerate spawn region")
  {
    doc["spawn_region"]["max"] = {0.1, -0.1, 0.1};
    CHECK_THROWS_AS(scenario_from_json(doc), InvalidInput);
  }
  SUBCASE("unordered keyframes")
  {
    doc["trajectory"][1]["t"] = 0.0;
    CHECK_THROWS_AS(scenario_from_json(doc), InvalidInput);
  }
  SUBCASE("missing OBJ names the path")
  {
    doc["objects"] = {{{"obj", "missing_mesh.obj"}}};
    const ScenarioConfig cfg = scenario_from_json(doc, "/nowhere");
    try {
      build_meshes(cfg);
      FAIL("expected LoadError");
    } catch (const LoadError& e) {
      CHECK(std::string(e.what()).find("/nowhere/missing_mesh.obj") != std::string::npos);
    }
  }
  SUBCASE("unknown object kind")
  {
    doc["objects"] = {{{"torus", {}}}};
    CHECK_THROWS_AS(scenario_from_json(doc), InvalidInput);
  }
}

TEST_CASE("trajectory sampling")
{
  const ScenarioConfig cfg = scenario_from_json(scenario_doc(1));
  const Vec3 anchor{1, 2, 3};
  const TrajectorySample a = sample_trajectory(cfg.trajectory, -1.0, anchor);
  CHECK(distance(a.palm.translation, Vec3{0.95, 2, 3.2}) < 1e-12);
  const TrajectorySample mid = sample_trajectory(cfg.trajectory, 0.25, anchor);
  CHECK(mid.palm.translation.z == doctest::Approx(3.1225));
  const TrajectorySample c = sample_trajectory(cfg.trajectory, 0.85, anchor);
  CHECK(c.close_fraction == doctest::Approx(0.5));
  CHECK(sample_trajectory(cfg.trajectory, 100.0, anchor).close_fraction == 1.0);
}

TEST_CASE("trial outcomes")
{
  ScenarioConfig cfg = scenario_from_json(scenario_doc(3));
  SUBCASE("ball on the approach path is grasped")
  {
    const TrialResult r = run_trial(cfg, 0);
    CHECK(r.outcome == TrialOutcome::Grasped);
    REQUIRE(r.grasp_time_s.has_value());
    CHECK(r.grasp_time_s.value() < 1.3);
    REQUIRE(r.report.hand_error_mm.has_value());
    CHECK(std::isfinite(*r.report.hand_error_mm));
  }
  SUBCASE("object out of reach times out")
  {
    for (Keyframe& k : cfg.trajectory) {
      k.space = KeyframeSpace::World;
      k.palm.translation = {0, 0, 2};
    }
    const TrialResult r = run_trial(cfg, 1);
    CHECK(r.outcome == TrialOutcome::Timeout);
    CHECK_FALSE(r.grasp_time_s.has_value());
    CHECK_FALSE(r.report.hand_error_mm.has_value());
  }
  SUBCASE("rerun is identical")
  {
    CHECK(trial_to_json(run_trial(cfg, 2)).dump() == trial_to_json(run_trial(cfg, 2)).dump());
  }
}

TEST_CASE("scenario results do not depend on worker count")
{
  const ScenarioConfig cfg = scenario_from_json(scenario_doc(6));
  const auto a = run_scenario(cfg, 1);
  const auto b = run_scenario(cfg, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].trial_index == i);
    CHECK(trial_to_json(a[i]).dump() == trial_to_json(b[i]).dump());
  }
}

TEST_CASE("aggregation")
{
  SUBCASE("single result")
  {
    const auto rows = aggregate_results({fake(0, "g", 1.5, 4.0)}, GroupBy::Object);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_time_s == 1.5);
    CHECK(rows[0].mean_error_mm == 4.0);
  }
  SUBCASE("two groups with known values")
  {
    const std::vector<TrialResult> rs{fake(0, "a", 1.0, 2.0), fake(1, "a", 3.0, 6.0),
                                      fake(2, "b", 2.0, 1.0), fake(3, "b", std::nullopt, std::nullopt)};
    const auto rows = aggregate_results(rs, GroupBy::Group);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].key == "a");
    CHECK(rows[0].mean_time_s == 2.0);
    CHECK(rows[0].mean_error_mm == 4.0);
    CHECK(rows[1].mean_time_s == 2.0);
    CHECK(rows[1].timeouts == 1);
    CHECK(rows[1].grasped == 1);
  }
  SUBCASE("all timeouts leave means absent")
  {
    const auto rows = aggregate_results({fake(4, "a", std::nullopt, std::nullopt)}, GroupBy::Object);
    CHECK_FALSE(rows[0].mean_time_s);
    CHECK_FALSE(rows[0].mean_error_mm);
    CHECK(rows[0].grasped == 0);
  }
  SUBCASE("object ids sort numerically")
  {
    const auto rows = aggregate_results({fake(10, "", 1, 1), fake(9, "", 1, 1)}, GroupBy::Object);
    CHECK(rows[0].key == "9");
  }
  CHECK_THROWS_AS(aggregate_results({}, GroupBy::Object), InvalidInput);
  CHECK_THROWS_AS(parse_group_by("colour"), InvalidInput);
}

TEST_CASE("aggregate means match a recomputation over the JSON records")
{
  const ScenarioConfig cfg = scenario_from_json(scenario_doc(4));
  const auto results = run_scenario(cfg, 2);
  double time_sum = 0, error_sum = 0;
  int n = 0, ne = 0;
  for (const TrialResult& r : results) {
    const auto j = trial_to_json(r);
    if (!j["grasp_time_s"].is_null()) {
      time_sum += j["grasp_time_s"].get<double>();
      ++n;
    }
    if (!j["hand_error_mm"].is_null()) {
      error_sum += j["hand_error_mm"].get<double>();
      ++ne;
    }
  }
  REQUIRE(n > 0);
  std::vector<TrialResult> parsed;
  for (const TrialResult& r : results)
    parsed.push_back(trial_from_json(trial_to_json(r)));
  const auto rows = aggregate_results(parsed, GroupBy::Group);
  CHECK(*rows[0].mean_time_s == doctest::Approx(time_sum / n).epsilon(1e-12));
  CHECK(*rows[0].mean_error_mm == doctest::Approx(error_sum / ne).epsilon(1e-12));
}

TEST_CASE("output rounding and formats")
{
  CHECK(round_output(1.0 / 3.0) == 0.333333333);
  CHECK(round_output(123456789012.0) == 123456789000.0);
  const auto j = rounded(nlohmann::json{{"a", 2.0 / 3.0}, {"b", {1.0 / 7.0}}, {"c", 3}});
  CHECK(j["a"].dump() == "0.666666667");
  CHECK(j["b"][0].dump() == "0.142857143");
  CHECK(j["c"] == 3);

  std::ostringstream csv;
  write_summary_csv(csv, aggregate_results({fake(0, "", 0.5, 1.0 / 3.0), fake(1, "", std::nullopt, std::nullopt)},
                                           GroupBy::Object));
  CHECK(csv.str() == "object_id,mean_time_s,mean_error_mm\n0,0.5,0.333333333\n1,,\n");
}

TEST_CASE("trial record round trip")
{
  const ScenarioConfig cfg = scenario_from_json(scenario_doc(1));
  const TrialResult r = run_trial(cfg, 0);
  const auto j = trial_to_json(r);
  for (const char* key : {"trial", "object_id", "label", "group", "spawn", "outcome", "grasp_time_s",
                          "grasp_frame", "hand_error_mm", "finger_error_mm", "nd_mm",
                          "missing_triggers", "impacts", "contacts"})
    CHECK(j.contains(key));
  const TrialResult back = trial_from_json(j);
  CHECK(trial_to_json(back).dump() == j.dump());
  CHECK_THROWS_AS(trial_from_json(nlohmann::json{{"trial", 0}}), InvalidInput);
}

TEST_CASE("aspect scores")
{
  const auto best = aspect_scores(response({3, 3, -3, -3, 3, 3, 3, 3, 3, -3, -3, 3, 3, 3}));
  CHECK(best.motor_control == 3.0);
  CHECK(best.finger_movement_realism == 3.0);
  CHECK(best.interaction_realism == 3.0);
  const auto zero = aspect_scores(response({}));
  CHECK(zero.motor_control == 0.0);
  CHECK(zero.interaction_realism == 0.0);
  CHECK_THROWS_AS(aspect_scores(response({4})), InvalidInput);
  CHECK_THROWS_AS(aspect_scores(response({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -4})), InvalidInput);
}

TEST_CASE("scores are affine with the published coefficients")
{
  // Finite differences of +-1 on each question recover the coefficient of
  // that question in each aspect and in the embodiment score.
  const std::array<std::array<double, 3>, 14> coeff = {{{0.25, 0, 0},
                                                        {0.25, 0, 0},
                                                        {-0.25, 0, 0},
                                                        {-0.25, 0, 0},
                                                        {0, 1.0 / 3, 0},
                                                        {0, 1.0 / 3, 0},
                                                        {0, 1.0 / 3, 0},
                                                        {0, 0, 1.0 / 7},
                                                        {0, 0, 1.0 / 7},
                                                        {0, 0, -1.0 / 7},
                                                        {0, 0, -1.0 / 7},
                                                        {0, 0, 1.0 / 7},
                                                        {0, 0, 1.0 / 7},
                                                        {0, 0, 1.0 / 7}}};
  Xoshiro256 g(3);
  for (int trial = 0; trial < 50; ++trial) {
    QuestionnaireResponse base;
    for (int& a : base.answers)
      a = static_cast<int>(g.below(5)) - 2;
    const AspectScores s0 = aspect_scores(base);
    for (int q = 0; q < 14; ++q)
      for (int step : {-1, 1}) {
        QuestionnaireResponse r = base;
        r.answers[q] += step;
        const AspectScores s1 = aspect_scores(r);
        CHECK(s1.motor_control - s0.motor_control == doctest::Approx(step * coeff[q][0]));
        CHECK(s1.finger_movement_realism - s0.finger_movement_realism ==
              doctest::Approx(step * coeff[q][1]));
        CHECK(s1.interaction_realism - s0.interaction_realism == doctest::Approx(step * coeff[q][2]));
        const double de = embodiment_score(s1) - embodiment_score(s0);
        CHECK(de == doctest::Approx(step * (coeff[q][0] + coeff[q][1] + 2 * coeff[q][2]) / 4));
      }
  }
}

TEST_CASE("question order randomization")
{
  const auto a = randomize_question_order(11);
  CHECK(a == randomize_question_order(11));
  CHECK(a != randomize_question_order(12));
  std::set<int> ids(a.begin(), a.end());
  CHECK(ids.size() == 14);
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == 14);

  // Answers collected in the shuffled order and re-keyed by id score the same.
  const QuestionnaireResponse original = response({2, 1, -1, 0, 3, 2, 1, 2, 2, -2, -1, 3, 1, 0});
  std::array<int, 14> sheet;
  for (int i = 0; i < 14; ++i)
    sheet[i] = original.question(a[i]);
  QuestionnaireResponse rekeyed;
  for (int i = 0; i < 14; ++i)
    rekeyed.answers[a[i] - 1] = sheet[i];
  CHECK(embodiment_score(aspect_scores(rekeyed)) == embodiment_score(aspect_scores(original)));
}

TEST_CASE("questionnaire JSON")
{
  const auto doc = nlohmann::json::parse(R"({"responses": [
    {"respondent": "a", "group": "x", "answers": [3,3,-3,-3,3,3,3,3,3,-3,-3,3,3,3]},
    {"respondent": "b", "group": "y", "answers": {"Q1":0,"Q2":0,"Q3":0,"Q4":0,"Q5":0,"Q6":0,"Q7":0,
                                                   "Q8":0,"Q9":0,"Q10":0,"Q11":0,"Q12":0,"Q13":0,"Q14":0}}]})");
  const auto rs = responses_from_json(doc);
  REQUIRE(rs.size() == 2);
  const auto s = summarize_questionnaire(rs);
  REQUIRE(s.groups.size() == 2);
  CHECK(s.groups[0].embodiment == 3.0);
  CHECK(s.overall == 1.5);
  CHECK_THROWS_AS(responses_from_json(nlohmann::json::parse(R"({"responses": [{"answers": [1,2]}]})")),
                  InvalidInput);
  CHECK_THROWS_AS(summarize_questionnaire({}), InvalidInput);
}
