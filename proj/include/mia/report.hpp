#pragma once

// Cross-run reporting: summary table over sweep runs and log-log ROC plots
// (SVG) rebuilt from the per-run roc CSVs.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mia/artifacts.hpp"

namespace mia {

struct RunSummary {
  std::string run_name;
  std::string template_id;
  std::string k;
  std::string position;
  std::string provider;
  std::vector<MetricsRow> metrics;
  std::size_t corrupt_lines = 0;
  long long queries_total = 0;
};

RunSummary summarize_run(const std::filesystem::path& dir);

void write_summary_csv(const std::filesystem::path& file, const std::vector<RunSummary>& runs);
void print_summary_table(std::ostream& out, const std::vector<RunSummary>& runs);

struct RocSeries {
  std::string name;
  std::vector<RocPoint> points;
};

// Log-log axes clamped at 1e-3; one polyline per series plus the chance
// diagonal.
void write_roc_svg(const std::filesystem::path& file, const std::string& title,
                   const std::vector<RocSeries>& series);

}  // namespace mia
