#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vgrasp/harness/aggregate.hpp"
#include "vgrasp/harness/trial.hpp"

namespace vgrasp {

inline constexpr const char* kTrialsFile = "trials.jsonl";
inline constexpr const char* kSummaryFile = "summary.csv";

/// Rounds to 9 significant digits, the precision of every number we write.
double round_output(double v);

/// Same rounding applied to every floating-point leaf of a document.
nlohmann::json rounded(const nlohmann::json& doc);

nlohmann::json trial_to_json(const TrialResult& r);
TrialResult trial_from_json(const nlohmann::json& j);

/// Writes trials.jsonl (one record per trial, sorted by index) and
/// summary.csv (per-object means) into `dir`, creating it if needed.
void write_results(const std::filesystem::path& dir, std::vector<TrialResult> results);
std::vector<TrialResult> read_results(const std::filesystem::path& dir);

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

void write_contacts_csv(std::ostream& out, const std::vector<TrialResult>& results);
nlohmann::json contacts_to_json(const std::vector<TrialResult>& results);

}  // namespace vgrasp
