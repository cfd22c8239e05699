#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vgrasp/harness/trial.hpp"

namespace vgrasp {

enum class GroupBy : std::uint8_t { Object, Label, Group };

// "object", "label" or "group".
GroupBy parse_group_by(std::string_view name);

struct AggregateRow
{
  std::string key;
  std::size_t trials = 0;
  std::size_t grasped = 0;
  std::size_t timeouts = 0;
  // Over grasped trials; absent when there are none.
  std::optional<double> mean_time_s;
  // Over grasped trials with a defined hand error.
  std::optional<double> mean_error_mm;
};

/// Arithmetic means per key. Rows are ordered by object id for
/// GroupBy::Object and lexicographically otherwise. Throws on empty input.
std::vector<AggregateRow> aggregate_results(const std::vector<TrialResult>& results, GroupBy by);

}  // namespace vgrasp
