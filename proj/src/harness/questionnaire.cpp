#include "vgrasp/harness/questionnaire.hpp"

#include <map>
#include <numeric>

#include "vgrasp/errors.hpp"
#include "vgrasp/harness/report_io.hpp"
#include "vgrasp/harness/rng.hpp"

namespace vgrasp {

int QuestionnaireResponse::question(int id) const
{
  if (id < 1 || id > kQuestionCount)
    throw InvalidInput("question id " + std::to_string(id) + " out of range 1..14");
  return answers[id - 1];
}

void QuestionnaireResponse::validate() const
{
  for (int i = 0; i < kQuestionCount; ++i)
    if (answers[i] < kLikertMin || answers[i] > kLikertMax)
      throw InvalidInput("Q" + std::to_string(i + 1) + " = " + std::to_string(answers[i]) +
                         " is outside the Likert range -3..3");
}

AspectScores aspect_scores(const QuestionnaireResponse& r)
{
  r.validate();
  auto q = [&](int id) { return static_cast<double>(r.question(id)); };
  AspectScores a;
  a.motor_control = ((q(1) + q(2)) - (q(3) + q(4))) / 4.0;
  a.finger_movement_realism = (q(5) + q(6) + q(7)) / 3.0;
  a.interaction_realism = ((q(8) + q(9)) - (q(10) + q(11)) + q(12) + q(13) + q(14)) / 7.0;
  return a;
}

double embodiment_score(const AspectScores& a)
{
  return (a.motor_control + a.finger_movement_realism + 2.0 * a.interaction_realism) / 4.0;
}

AspectScores mean_aspects(const std::vector<AspectScores>& scores)
{
  if (scores.empty())
    throw InvalidInput("no aspect scores to average");
  AspectScores m;
  for (const AspectScores& s : scores) {
    m.motor_control += s.motor_control;
    m.finger_movement_realism += s.finger_movement_realism;
    m.interaction_realism += s.interaction_realism;
  }
  const double n = static_cast<double>(scores.size());
  m.motor_control /= n;
  m.finger_movement_realism /= n;
  m.interaction_realism /= n;
  return m;
}

std::array<int, kQuestionCount> randomize_question_order(std::uint64_t seed)
{
  std::array<int, kQuestionCount> order;
  std::iota(order.begin(), order.end(), 1);
  Xoshiro256 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(i + 1)]);
  return order;
}

QuestionnaireSummary summarize_questionnaire(const std::vector<QuestionnaireResponse>& responses)
{
  if (responses.empty())
    throw InvalidInput("no questionnaire responses");
  std::map<std::string, std::vector<AspectScores>> by_group;
  for (const QuestionnaireResponse& r : responses)
    by_group[r.group].push_back(aspect_scores(r));

  QuestionnaireSummary out;
  for (const auto& [name, scores] : by_group) {
    GroupScores g{name, scores.size(), mean_aspects(scores), 0.0};
    g.embodiment = embodiment_score(g.aspects);
    out.overall += g.embodiment;
    out.groups.push_back(g);
  }
  out.overall /= static_cast<double>(out.groups.size());
  return out;
}

namespace {

using nlohmann::json;

json aspects_json(const AspectScores& a)
{
  return {{"motor_control", a.motor_control},
          {"finger_movement_realism", a.finger_movement_realism},
          {"interaction_realism", a.interaction_realism}};
}

}  // namespace

std::vector<QuestionnaireResponse> responses_from_json(const json& doc)
{
  std::vector<QuestionnaireResponse> out;
  try {
    for (const json& j : doc.at("responses")) {
      QuestionnaireResponse r;
      r.respondent = j.value("respondent", "r" + std::to_string(out.size() + 1));
      r.group = j.value("group", "all");
      const json& a = j.at("answers");
      if (a.is_array()) {
        if (a.size() != kQuestionCount)
          throw InvalidInput("respondent " + r.respondent + ": expected 14 answers");
        for (int i = 0; i < kQuestionCount; ++i)
          r.answers[i] = a[i].get<int>();
      } else {
        for (int i = 0; i < kQuestionCount; ++i) {
          const std::string key = "Q" + std::to_string(i + 1);
          if (!a.contains(key))
            throw InvalidInput("respondent " + r.respondent + ": missing " + key);
          r.answers[i] = a.at(key).get<int>();
        }
      }
      r.validate();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed questionnaire responses: ") + e.what());
  }
  return out;
}

json summary_to_json(const std::vector<QuestionnaireResponse>& responses,
                     const QuestionnaireSummary& summary)
{
  json doc;
  json rs = json::array();
  for (const QuestionnaireResponse& r : responses) {
    const AspectScores a = aspect_scores(r);
    rs.push_back({{"respondent", r.respondent},
                  {"group", r.group},
                  {"aspects", aspects_json(a)},
                  {"embodiment", embodiment_score(a)}});
  }
  json gs = json::array();
  for (const GroupScores& g : summary.groups)
    gs.push_back({{"group", g.group},
                  {"respondents", g.respondents},
                  {"aspects", aspects_json(g.aspects)},
                  {"embodiment", g.embodiment}});
  doc["responses"] = rs;
  doc["groups"] = gs;
  doc["overall_embodiment"] = summary.overall;
  return rounded(doc);
}

}  // namespace vgrasp
