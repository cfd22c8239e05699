#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vgrasp {

inline constexpr int kQuestionCount = 14;
inline constexpr int kLikertMin = -3;
inline constexpr int kLikertMax = 3;

// Answers to questions 1..14 on the 7-point scale; answers[0] is question 1.
struct QuestionnaireResponse
{
  std::string respondent;
  std::string group;
  std::array<int, kQuestionCount> answers{};

  int question(int id) const;
  void validate() const;
};

struct AspectScores
{
  double motor_control = 0.0;
  double finger_movement_realism = 0.0;
  double interaction_realism = 0.0;
};

/// Motor control (1-4), finger movement realism (5-7) and interaction
/// realism (8-14). Negatively phrased items (3, 4, 10, 11) subtract.
AspectScores aspect_scores(const QuestionnaireResponse& r);

/// (MC + FMR + 2 IR) / 4. Interaction realism counts double.
double embodiment_score(const AspectScores& a);

AspectScores mean_aspects(const std::vector<AspectScores>& scores);

/// Seeded Fisher-Yates shuffle of question ids 1..14.
std::array<int, kQuestionCount> randomize_question_order(std::uint64_t seed);

struct GroupScores
{
  std::string group;
  std::size_t respondents = 0;
  AspectScores aspects;
  double embodiment = 0.0;
};

struct QuestionnaireSummary
{
  std::vector<GroupScores> groups;  // sorted by name
  // Mean of the per-group embodiment scores.
  double overall = 0.0;
};

QuestionnaireSummary summarize_questionnaire(const std::vector<QuestionnaireResponse>& responses);

/// {"responses": [{"respondent": "p01", "group": "experienced",
///                 "answers": [q1, ..., q14]}]}. Answers may instead be an
/// object keyed "Q1".."Q14" in any order.
std::vector<QuestionnaireResponse> responses_from_json(const nlohmann::json& doc);
nlohmann::json summary_to_json(const std::vector<QuestionnaireResponse>& responses,
                               const QuestionnaireSummary& summary);

}  // namespace vgrasp
