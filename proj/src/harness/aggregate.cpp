#include "vgrasp/harness/aggregate.hpp"

#include <algorithm>
#include <map>

namespace vgrasp {

GroupBy parse_group_by(std::string_view name)
{
  if (name == "object")
    return GroupBy::Object;
  if (name == "label")
    return GroupBy::Label;
  if (name == "group")
    return GroupBy::Group;
  throw InvalidInput("unknown grouping '" + std::string(name) + "' (object, label, group)");
}

std::vector<AggregateRow> aggregate_results(const std::vector<TrialResult>& results, GroupBy by)
{
  if (results.empty())
    throw InvalidInput("no trial results to aggregate");

  struct Acc
  {
    AggregateRow row;
    double time_sum = 0.0;
    double error_sum = 0.0;
    std::size_t errors = 0;
  };
  // Object ids sort numerically; other keys lexicographically.
  std::map<std::pair<std::uint32_t, std::string>, Acc> acc;
  for (const TrialResult& r : results) {
    std::pair<std::uint32_t, std::string> key;
    switch (by) {
      case GroupBy::Object: key = {r.object.value, std::to_string(r.object.value)}; break;
      case GroupBy::Label: key = {0, r.label}; break;
      case GroupBy::Group: key = {0, r.group}; break;
    }
    Acc& a = acc[key];
    a.row.key = key.second;
    ++a.row.trials;
    if (r.outcome == TrialOutcome::Timeout) {
      ++a.row.timeouts;
      continue;
    }
    ++a.row.grasped;
    a.time_sum += r.grasp_time_s.value();
    if (r.report.hand_error_mm) {
      a.error_sum += *r.report.hand_error_mm;
      ++a.errors;
    }
  }

  std::vector<AggregateRow> rows;
  for (auto& [key, a] : acc) {
    if (a.row.grasped > 0)
      a.row.mean_time_s = a.time_sum / static_cast<double>(a.row.grasped);
    if (a.errors > 0)
      a.row.mean_error_mm = a.error_sum / static_cast<double>(a.errors);
    rows.push_back(a.row);
  }
  return rows;
}

}  // namespace vgrasp
