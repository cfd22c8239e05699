#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vgrasp/harness/aggregate.hpp"
#include "vgrasp/harness/questionnaire.hpp"
#include "vgrasp/harness/report_io.hpp"
#include "vgrasp/harness/scenario.hpp"
#include "vgrasp/harness/trial.hpp"

namespace {

using namespace vgrasp;

int simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
             const std::string& out_dir, unsigned workers)
{
  ScenarioConfig cfg = load_scenario(scenario_path);
  if (seed)
    cfg.seed = *seed;
  const auto results = run_scenario(cfg, workers);
  write_results(out_dir, results);

  std::size_t grasped = 0;
  for (const TrialResult& r : results)
    grasped += r.outcome == TrialOutcome::Grasped;
  std::cerr << results.size() << " trials, " << grasped << " grasped, "
            << results.size() - grasped << " timed out -> " << out_dir << '\n';
  return 0;
}

int score_questionnaire(const std::string& responses_path, const std::string& out_path)
{
  std::ifstream in(responses_path);
  if (!in)
    throw LoadError("cannot open " + responses_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(responses_path + ": " + e.what());
  }
  const auto responses = responses_from_json(doc);
  const auto summary = summarize_questionnaire(responses);
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw LoadError("cannot write " + out_path);
  out << summary_to_json(responses, summary).dump(2) << '\n';
  return 0;
}

int export_contacts(const std::string& results_dir, const std::string& format)
{
  const auto results = read_results(results_dir);
  if (format == "csv")
    write_contacts_csv(std::cout, results);
  else
    std::cout << contacts_to_json(results).dump(2) << '\n';
  return 0;
}

int aggregate(const std::string& results_dir, const std::string& group_by)
{
  const GroupBy by = parse_group_by(group_by);
  write_aggregate_csv(std::cout, aggregate_results(read_results(results_dir), by));
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Deterministic virtual-hand grasp simulation and evaluation"};
  app.require_subcommand(1);

  std::string scenario, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  auto* sim = app.add_subcommand("simulate", "Run every trial of a scenario");
  sim->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Override the scenario seed");
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->add_option("--jobs", workers, "Worker threads (0 = all cores)");

  std::string responses, score_out;
  auto* score = app.add_subcommand("score-questionnaire", "Score Likert responses");
  score->add_option("--responses", responses, "Responses JSON")->required()->check(CLI::ExistingFile);
  score->add_option("--out", score_out, "Output JSON")->required();

  std::string results_dir, format = "json";
  auto* contacts = app.add_subcommand("export-contacts", "Print contact points of a results directory");
  contacts->add_option("--results", results_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
  contacts->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string group_by = "object";
  auto* agg = app.add_subcommand("aggregate", "Mean time and error per key");
  agg->add_option("--results", results_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
  agg->add_option("--group-by", group_by, "object, label or group")
      ->check(CLI::IsMember({"object", "label", "group"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim)
      return simulate(scenario, seed, out_dir, workers);
    if (*score)
      return score_questionnaire(responses, score_out);
    if (*contacts)
      return export_contacts(results_dir, format);
    if (*agg)
      return aggregate(results_dir, group_by);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
