#include "mia/artifacts.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"
#include "mia/version.hpp"

namespace mia {

using nlohmann::json;

namespace {

std::string fmt_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

json outcome_to_json(const AttackOutcome& outcome) {
  json j = {{"score", outcome.raw_score},
            {"decision", std::string(to_string(outcome.decision))},
            {"queries", outcome.queries_used}};
  if (outcome.iteration_cap > 0) j["iteration_cap"] = outcome.iteration_cap;
  if (outcome.prefix_fallback) j["prefix_fallback"] = true;
  return j;
}

json sample_to_json(const LabeledSample& sample) {
  return {{"text", sample.text}, {"label", sample.label}};
}

}  // namespace

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  json j = {{"config_path", manifest.config_path},
            {"output_dir", manifest.output_dir},
            {"created_at", manifest.created_at},
            {"toolkit_version", manifest.toolkit_version},
            {"resolved_config", manifest.resolved_config}};
  auto out = open_out(dir / "manifest.json");
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("no manifest.json in " + dir.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError((dir / "manifest.json").string() + ": " + e.what());
  }
  RunManifest manifest;
  manifest.config_path = j.value("config_path", "");
  manifest.output_dir = j.value("output_dir", "");
  manifest.created_at = j.value("created_at", "");
  manifest.toolkit_version = j.value("toolkit_version", "");
  manifest.resolved_config = j.value("resolved_config", json::object());
  return manifest;
}

void write_trials_jsonl(const std::filesystem::path& dir,
                        const std::vector<TrialRecord>& trials) {
  auto out = open_out(dir / "trials.jsonl");
  for (const auto& trial : trials) {
    json j = {{"schema", kTrialSchemaVersion},
              {"trial", trial.trial_index},
              {"trial_seed", trial.inputs.trial_seed},
              {"k", trial.inputs.demonstrations.size()},
              {"target_position", trial.inputs.target_position},
              {"queries", trial.queries_total}};
    json demos = json::array();
    for (const auto& d : trial.inputs.demonstrations) demos.push_back(sample_to_json(d));
    j["demonstrations"] = demos;
    j["member"] = sample_to_json(trial.inputs.member_target);
    j["nonmember"] = sample_to_json(trial.inputs.nonmember_target);
    if (trial.failed) {
      j["failed"] = true;
      j["failure"] = trial.failure;
    } else {
      json outcomes = json::object();
      for (const auto& [kind, pair] : trial.outcomes) {
        outcomes[std::string(to_string(kind))] = {{"member", outcome_to_json(pair.member)},
                                                  {"nonmember", outcome_to_json(pair.nonmember)}};
      }
      j["outcomes"] = outcomes;
    }
    out << j.dump() << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& dir,
                       const std::vector<MetricsReport>& reports,
                       const std::vector<double>& fpr_targets) {
  auto out = open_out(dir / "metrics.csv");
  out << "attack,n,accuracy,advantage,abstain_rate,auc";
  for (double target : fpr_targets) out << ",tpr_at_" << fmt_double(target);
  out << '\n';
  for (const auto& report : reports) {
    out << to_string(report.attack) << ',' << report.n_decisions << ','
        << fmt_double(report.accuracy) << ',' << fmt_double(report.advantage) << ','
        << fmt_double(report.abstain_rate) << ',';
    if (report.auc) out << fmt_double(*report.auc);
    for (double target : fpr_targets) {
      out << ',';
      auto it = report.tpr_at.find(target);
      if (it != report.tpr_at.end()) out << fmt_double(it->second);
    }
    out << '\n';
  }
}

void write_roc_csv(const std::filesystem::path& dir, AttackKind attack,
                   const std::vector<RocPoint>& roc) {
  auto out = open_out(dir / ("roc_" + std::string(to_string(attack)) + ".csv"));
  out << "fpr,tpr\n";
  for (const auto& point : roc)
    out << fmt_double(point.fpr) << ',' << fmt_double(point.tpr) << '\n';
}

std::vector<RocPoint> read_roc_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::vector<RocPoint> roc;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;  // header
    }
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(file.string() + ": bad ROC row: " + line);
    roc.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return roc;
}

void write_report_json(const std::filesystem::path& dir, const ExperimentResult& result) {
  json metrics = json::array();
  for (const auto& report : result.reports) {
    json m = {{"attack", std::string(to_string(report.attack))},
              {"n", report.n_decisions},
              {"accuracy", report.accuracy},
              {"advantage", report.advantage},
              {"abstain_rate", report.abstain_rate}};
    if (report.auc) m["auc"] = *report.auc;
    if (!report.tpr_at.empty()) {
      json tpr = json::object();
      for (const auto& [target, value] : report.tpr_at) tpr[fmt_double(target)] = value;
      m["tpr_at_fpr"] = tpr;
    }
    metrics.push_back(m);
  }
  json ledger = {{"total", result.ledger.total}};
  json per_attack = json::object();
  for (const auto& [kind, count] : result.ledger.per_attack)
    per_attack[std::string(to_string(kind))] = count;
  ledger["per_attack"] = per_attack;

  json j = {{"schema", kTrialSchemaVersion},
            {"n_trials", result.trials.size()},
            {"failed_trials", result.failed_trials},
            {"ledger", ledger},
            {"metrics", metrics}};
  auto out = open_out(dir / "report.json");
  out << j.dump(2) << '\n';
}

void write_run_artifacts(const std::filesystem::path& dir, const RunManifest& manifest,
                         const ExperimentResult& result,
                         const std::vector<double>& fpr_targets) {
  std::filesystem::create_directories(dir);
  write_manifest(dir, manifest);
  write_trials_jsonl(dir, result.trials);
  write_metrics_csv(dir, result.reports, fpr_targets);
  for (const auto& report : result.reports)
    if (report.auc) write_roc_csv(dir, report.attack, report.roc);
  write_report_json(dir, result);
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metrics.csv");
  if (!in) throw ConfigError("no metrics.csv in " + dir.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError((dir / "metrics.csv").string() + ": empty");

  std::vector<std::string> headers;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    headers.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    start = 0;
    while (true) {
      auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != headers.size())
      throw ParseError((dir / "metrics.csv").string() + ": ragged row: " + line);
    MetricsRow row;
    row.attack = fields[0];
    row.n = static_cast<std::size_t>(std::stoull(fields[1]));
    row.accuracy = std::stod(fields[2]);
    row.advantage = std::stod(fields[3]);
    row.abstain_rate = std::stod(fields[4]);
    row.auc = fields[5];
    for (std::size_t i = 6; i < fields.size(); ++i)
      row.tpr_columns.emplace_back(headers[i], fields[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

TrialScanResult scan_trials_jsonl(const std::filesystem::path& dir) {
  std::ifstream in(dir / "trials.jsonl");
  if (!in) throw ConfigError("no trials.jsonl in " + dir.string());
  TrialScanResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("schema")) {
      ++result.corrupt_lines;
      continue;
    }
    if (j.at("schema").get<int>() != kTrialSchemaVersion)
      throw ParseError((dir / "trials.jsonl").string() + ": schema version " +
                       j.at("schema").dump() + " needs migration (expected " +
                       std::to_string(kTrialSchemaVersion) + ")");
    ++result.valid_lines;
    result.queries_total += j.value("queries", 0LL);
  }
  return result;
}

}  // namespace mia
