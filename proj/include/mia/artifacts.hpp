#pragma once

// Run-directory artifacts: manifest.json, trials.jsonl, metrics.csv,
// roc_<attack>.csv, report.json. Trial and metric files are byte-stable
// functions of the experiment result; wall-clock time lives only in the
// manifest.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mia/config.hpp"
#include "mia/harness.hpp"

namespace mia {

struct RunManifest {
  std::string config_path;
  std::string output_dir;
  std::string created_at;  // ISO 8601 UTC
  std::string toolkit_version;
  nlohmann::json resolved_config;
};

std::string iso8601_utc_now();

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& dir);

void write_trials_jsonl(const std::filesystem::path& dir, const std::vector<TrialRecord>& trials);

void write_metrics_csv(const std::filesystem::path& dir, const std::vector<MetricsReport>& reports,
                       const std::vector<double>& fpr_targets);

void write_roc_csv(const std::filesystem::path& dir, AttackKind attack,
                   const std::vector<RocPoint>& roc);
std::vector<RocPoint> read_roc_csv(const std::filesystem::path& file);

void write_report_json(const std::filesystem::path& dir, const ExperimentResult& result);

// Everything a finished run leaves behind.
void write_run_artifacts(const std::filesystem::path& dir, const RunManifest& manifest,
                         const ExperimentResult& result, const std::vector<double>& fpr_targets);

struct MetricsRow {
  std::string attack;
  std::size_t n = 0;
  double accuracy = 0.0;
  double advantage = 0.0;
  double abstain_rate = 0.0;
  std::string auc;  // empty for binary attacks
  std::vector<std::pair<std::string, std::string>> tpr_columns;
};
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& dir);

struct TrialScanResult {
  std::size_t valid_lines = 0;
  std::size_t corrupt_lines = 0;
  long long queries_total = 0;
};
// Tolerant scan: corrupt lines are skipped and counted. A line with a schema
// version other than kTrialSchemaVersion raises ParseError (migration needed).
TrialScanResult scan_trials_jsonl(const std::filesystem::path& dir);

}  // namespace mia
