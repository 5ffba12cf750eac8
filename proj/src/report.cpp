#include "mia/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"

namespace mia {

using nlohmann::json;

RunSummary summarize_run(const std::filesystem::path& dir) {
  RunSummary summary;
  summary.run_name = dir.filename().string().empty() ? dir.string() : dir.filename().string();

  RunManifest manifest = read_manifest(dir);
  const json& cfg = manifest.resolved_config;
  if (cfg.contains("experiment")) {
    const json& exp = cfg.at("experiment");
    summary.template_id = exp.value("template", "");
    if (exp.contains("k")) summary.k = std::to_string(exp.at("k").get<int>());
    summary.position = exp.value("target_position", "");
  }
  if (cfg.contains("provider")) {
    const json& prov = cfg.at("provider");
    summary.provider = prov.value("kind", "");
    std::string model = prov.value("model_name", "");
    if (!model.empty()) summary.provider += ":" + model;
  }

  summary.metrics = read_metrics_csv(dir);
  TrialScanResult scan = scan_trials_jsonl(dir);
  summary.corrupt_lines = scan.corrupt_lines;
  summary.queries_total = scan.queries_total;
  return summary;
}

void write_summary_csv(const std::filesystem::path& file, const std::vector<RunSummary>& runs) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());

  std::vector<std::string> tpr_headers;
  if (!runs.empty() && !runs.front().metrics.empty())
    for (const auto& [header, _] : runs.front().metrics.front().tpr_columns)
      tpr_headers.push_back(header);

  out << "run,template,k,position,provider,attack,n,accuracy,advantage,abstain_rate,auc";
  for (const auto& header : tpr_headers) out << ',' << header;
  out << '\n';
  for (const auto& run : runs) {
    for (const auto& row : run.metrics) {
      out << run.run_name << ',' << run.template_id << ',' << run.k << ',' << run.position << ','
          << run.provider << ',' << row.attack << ',' << row.n << ',' << row.accuracy << ','
          << row.advantage << ',' << row.abstain_rate << ',' << row.auc;
      for (const auto& header : tpr_headers) {
        out << ',';
        for (const auto& [h, v] : row.tpr_columns)
          if (h == header) out << v;
      }
      out << '\n';
    }
  }
}

void print_summary_table(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << std::left << std::setw(22) << "run" << std::setw(6) << "k" << std::setw(10) << "position"
      << std::setw(12) << "attack" << std::right << std::setw(10) << "accuracy" << std::setw(11)
      << "advantage" << std::setw(8) << "auc" << '\n';
  for (const auto& run : runs) {
    for (const auto& row : run.metrics) {
      char acc[16], adv[16];
      std::snprintf(acc, sizeof(acc), "%.3f", row.accuracy);
      std::snprintf(adv, sizeof(adv), "%.3f", row.advantage);
      out << std::left << std::setw(22) << run.run_name.substr(0, 21) << std::setw(6) << run.k
          << std::setw(10) << run.position << std::setw(12) << row.attack << std::right
          << std::setw(10) << acc << std::setw(11) << adv << std::setw(8)
          << (row.auc.empty() ? "-" : row.auc.substr(0, 6)) << '\n';
    }
  }
}

namespace {

constexpr double kLogFloor = 1e-3;
constexpr int kWidth = 560, kHeight = 480;
constexpr int kMarginLeft = 64, kMarginRight = 24, kMarginTop = 40, kMarginBottom = 48;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

double log_coord(double value) {
  double clamped = std::clamp(value, kLogFloor, 1.0);
  return std::log10(clamped) / -std::log10(kLogFloor);  // in [-1, 0] -> [0,1] after +1
}

double x_px(double fpr) {
  double t = 1.0 + log_coord(fpr);
  return kMarginLeft + t * (kWidth - kMarginLeft - kMarginRight);
}

double y_px(double tpr) {
  double t = 1.0 + log_coord(tpr);
  return kHeight - kMarginBottom - t * (kHeight - kMarginTop - kMarginBottom);
}

}  // namespace

void write_roc_svg(const std::filesystem::path& file, const std::string& title,
                   const std::vector<RocSeries>& series) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << title << "</text>\n";

  // Decade gridlines and labels.
  for (int e = -3; e <= 0; ++e) {
    double v = std::pow(10.0, e);
    char label[16];
    std::snprintf(label, sizeof(label), "1e%d", e);
    out << "<line x1=\"" << x_px(v) << "\" y1=\"" << y_px(kLogFloor) << "\" x2=\"" << x_px(v)
        << "\" y2=\"" << y_px(1.0) << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << x_px(kLogFloor) << "\" y1=\"" << y_px(v) << "\" x2=\"" << x_px(1.0)
        << "\" y2=\"" << y_px(v) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x_px(v) << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
        << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << y_px(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
        << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">false positive "
         "rate</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">true positive rate</text>\n";

  // Chance diagonal.
  out << "<line x1=\"" << x_px(kLogFloor) << "\" y1=\"" << y_px(kLogFloor) << "\" x2=\""
      << x_px(1.0) << "\" y2=\"" << y_px(1.0) << "\" stroke=\"#999999\" stroke-dasharray=\"4\"/>\n";

  int color = 0;
  int legend_y = kMarginTop + 4;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : s.points) out << x_px(p.fpr) << ',' << y_px(p.tpr) << ' ';
    out << "\"/>\n";
    out << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << legend_y << "\" x2=\""
        << kMarginLeft + 34 << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kMarginLeft + 40 << "\" y=\"" << legend_y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
    legend_y += 16;
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace mia
