#include "vgrasp/harness/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "vgrasp/io/json_math.hpp"

namespace vgrasp {

namespace {

using nlohmann::json;
using json_io::read_vec3;
using json_io::write_vec3;

std::string format_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v)
{
  return v ? format_number(*v) : std::string();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key)
{
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

double round_output(double v)
{
  if (!std::isfinite(v))
    return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json rounded(const json& doc)
{
  if (doc.is_number_float())
    return round_output(doc.get<double>());
  if (doc.is_array() || doc.is_object()) {
    json out = doc;
    for (auto& item : out)
      item = rounded(item);
    return out;
  }
  return doc;
}

json trial_to_json(const TrialResult& r)
{
  json nd = json::object();
  for (PhalanxId p : trigger_phalanges())
    nd[p.name()] = nullptr;
  for (const ImpactRecord& i : r.impacts)
    nd[i.phalanx.name()] = i.nd_mm;

  json fingers = json::object();
  for (const FingerError& f : r.report.fingers)
    fingers[std::string(finger_name(f.finger))] = f.mean_abs_mm;

  json missing = json::array();
  for (PhalanxId p : r.report.missing_triggers)
    missing.push_back(p.name());

  json impacts = json::array();
  for (const ImpactRecord& i : r.impacts)
    impacts.push_back({{"phalanx", i.phalanx.name()},
                       {"sp", write_vec3(i.sp)},
                       {"ip", write_vec3(i.ip)},
                       {"ctc", write_vec3(i.ctc)},
                       {"nd_mm", i.nd_mm}});

  json contacts = json::array();
  for (const ContactPointRecord& c : r.contacts)
    contacts.push_back({{"phalanx", c.phalanx.name()},
                        {"world", write_vec3(c.point_world)},
                        {"local", write_vec3(c.point_object_local)}});

  const bool grasped = r.outcome == TrialOutcome::Grasped;
  json doc = {{"trial", r.trial_index},
              {"object_id", r.object.value},
              {"label", r.label},
              {"group", r.group},
              {"spawn", json_io::write_transform(r.spawn_pose)},
              {"outcome", grasped ? "grasped" : "timeout"},
              {"grasp_time_s", optional_json(r.grasp_time_s)},
              {"grasp_frame", r.grasp_frame ? json(*r.grasp_frame) : json(nullptr)},
              {"hand_error_mm", optional_json(r.report.hand_error_mm)},
              {"finger_error_mm", grasped ? fingers : json(nullptr)},
              {"nd_mm", grasped ? nd : json(nullptr)},
              {"missing_triggers", missing},
              {"impacts", impacts},
              {"contacts", contacts}};
  return rounded(doc);
}

TrialResult trial_from_json(const json& j)
{
  TrialResult r;
  try {
    r.trial_index = j.at("trial").get<std::size_t>();
    r.object = ObjectId{j.at("object_id").get<std::uint32_t>()};
    r.label = j.value("label", "");
    r.group = j.value("group", "");
    r.spawn_pose = json_io::read_transform(j.at("spawn"));
    const std::string outcome = j.at("outcome").get<std::string>();
    if (outcome == "grasped")
      r.outcome = TrialOutcome::Grasped;
    else if (outcome != "timeout")
      throw InvalidInput("unknown outcome '" + outcome + "'");
    r.grasp_time_s = read_optional(j, "grasp_time_s");
    if (j.contains("grasp_frame") && !j.at("grasp_frame").is_null())
      r.grasp_frame = j.at("grasp_frame").get<std::uint64_t>();
    if (r.grasp_time_s.has_value() != (r.outcome == TrialOutcome::Grasped))
      throw InvalidInput("grasp_time_s must be present exactly for grasped trials");

    r.report.object = r.object;
    r.report.grasp_time = r.grasp_time_s.value_or(0.0);
    r.report.hand_error_mm = read_optional(j, "hand_error_mm");
    for (int f = 0; f < kFingerCount; ++f)
      r.report.fingers[f].finger = static_cast<Finger>(f);
    if (j.contains("finger_error_mm") && j.at("finger_error_mm").is_object())
      for (const auto& [name, v] : j.at("finger_error_mm").items())
        r.report.fingers[static_cast<int>(parse_finger(name))].mean_abs_mm = v.get<double>();
    for (const json& m : j.value("missing_triggers", json::array()))
      r.report.missing_triggers.push_back(parse_phalanx(m.get<std::string>()));

    for (const json& i : j.value("impacts", json::array())) {
      ImpactRecord rec{parse_phalanx(i.at("phalanx").get<std::string>()),
                       read_vec3(i.at("sp"), "sp"), read_vec3(i.at("ip"), "ip"),
                       read_vec3(i.at("ctc"), "ctc"), i.at("nd_mm").get<double>()};
      r.report.fingers[static_cast<int>(rec.phalanx.finger)]
          .abs_nd_mm[static_cast<int>(rec.phalanx.segment) - 1] = std::abs(rec.nd_mm);
      r.impacts.push_back(rec);
    }
    for (const json& c : j.value("contacts", json::array()))
      r.contacts.push_back({parse_phalanx(c.at("phalanx").get<std::string>()),
                            read_vec3(c.at("world"), "world"), read_vec3(c.at("local"), "local"),
                            r.object});
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed trial record: ") + e.what());
  }
  return r;
}

void write_results(const std::filesystem::path& dir, std::vector<TrialResult> results)
{
  std::filesystem::create_directories(dir);
  std::sort(results.begin(), results.end(),
            [](const TrialResult& a, const TrialResult& b) { return a.trial_index < b.trial_index; });

  std::ofstream trials(dir / kTrialsFile, std::ios::binary);
  if (!trials)
    throw LoadError("cannot write " + (dir / kTrialsFile).string());
  for (const TrialResult& r : results)
    trials << trial_to_json(r).dump() << '\n';

  std::ofstream summary(dir / kSummaryFile, std::ios::binary);
  if (!summary)
    throw LoadError("cannot write " + (dir / kSummaryFile).string());
  write_summary_csv(summary, aggregate_results(results, GroupBy::Object));
}

std::vector<TrialResult> read_results(const std::filesystem::path& dir)
{
  const auto path = dir / kTrialsFile;
  std::ifstream in(path);
  if (!in)
    throw LoadError("cannot open " + path.string());
  std::vector<TrialResult> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty())
      continue;
    try {
      out.push_back(trial_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw LoadError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows)
{
  out << "object_id,mean_time_s,mean_error_mm\n";
  for (const AggregateRow& r : rows)
    out << r.key << ',' << format_optional(r.mean_time_s) << ','
        << format_optional(r.mean_error_mm) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows)
{
  out << "key,trials,grasped,timeouts,mean_time_s,mean_error_mm\n";
  for (const AggregateRow& r : rows)
    out << r.key << ',' << r.trials << ',' << r.grasped << ',' << r.timeouts << ','
        << format_optional(r.mean_time_s) << ',' << format_optional(r.mean_error_mm) << '\n';
}

void write_contacts_csv(std::ostream& out, const std::vector<TrialResult>& results)
{
  out << "trial,object_id,phalanx,world_x,world_y,world_z,local_x,local_y,local_z\n";
  for (const TrialResult& r : results)
    for (const ContactPointRecord& c : r.contacts) {
      out << r.trial_index << ',' << r.object.value << ',' << c.phalanx.name();
      for (const Vec3& v : {c.point_world, c.point_object_local})
        out << ',' << format_number(v.x) << ',' << format_number(v.y) << ',' << format_number(v.z);
      out << '\n';
    }
}

json contacts_to_json(const std::vector<TrialResult>& results)
{
  json out = json::array();
  for (const TrialResult& r : results)
    for (const ContactPointRecord& c : r.contacts)
      out.push_back({{"trial", r.trial_index},
                     {"object_id", r.object.value},
                     {"phalanx", c.phalanx.name()},
                     {"world", write_vec3(c.point_world)},
                     {"local", write_vec3(c.point_object_local)}});
  return rounded(out);
}

}  // namespace vgrasp
