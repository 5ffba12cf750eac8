#include "mia/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mia/errors.hpp"

namespace mia {

double compute_accuracy(std::span<const DecidedTruth> decisions) {
  if (decisions.empty()) throw MetricError("no decisions to score");
  std::size_t correct = 0;
  for (const auto& d : decisions) {
    bool predicted_member = d.decision == Decision::member;
    if (predicted_member == d.is_member) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(decisions.size());
}

double compute_advantage(std::span<const DecidedTruth> decisions) {
  return 2.0 * (compute_accuracy(decisions) - 0.5);
}

std::vector<RocPoint> compute_roc(std::span<const ScoredTruth> scores) {
  std::size_t members = 0, nonmembers = 0;
  for (const auto& s : scores) (s.is_member ? members : nonmembers)++;
  if (members == 0 || nonmembers == 0)
    throw MetricError("ROC needs both members and nonmembers");

  std::vector<ScoredTruth> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredTruth& a, const ScoredTruth& b) { return a.score > b.score; });

  std::vector<RocPoint> roc;
  roc.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    double threshold = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == threshold) {
      (sorted[i].is_member ? tp : fp)++;
      ++i;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(nonmembers),
                   static_cast<double>(tp) / static_cast<double>(members)});
  }
  return roc;  // last point is (1,1) by construction
}

double auc_from_roc(const std::vector<RocPoint>& roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) * 0.5;
  return area;
}

double tpr_at_fpr(const std::vector<RocPoint>& roc, double target_fpr) {
  double best = 0.0;
  for (const auto& p : roc)
    if (p.fpr <= target_fpr) best = std::max(best, p.tpr);
  return best;
}

double calibrate_threshold(std::span<const ScoredTruth> scores) {
  std::size_t members = 0, nonmembers = 0;
  for (const auto& s : scores) (s.is_member ? members : nonmembers)++;
  if (members == 0 || nonmembers == 0)
    throw CalibrationError("calibration needs both members and nonmembers");

  std::vector<double> candidates;
  candidates.reserve(scores.size() + 1);
  for (const auto& s : scores) candidates.push_back(s.score);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.push_back(candidates.back() + 1.0);  // the all-nonmember rule

  double best_threshold = candidates.front();
  double best_correct = -1.0;
  for (double theta : candidates) {
    double correct = 0;
    for (const auto& s : scores)
      if ((s.score >= theta) == s.is_member) ++correct;
    if (correct > best_correct) {
      best_correct = correct;
      best_threshold = theta;
    }
  }
  return best_threshold;
}

MetricsReport build_metrics_report(AttackKind attack, std::span<const DecidedTruth> decisions,
                                   std::span<const ScoredTruth> scores,
                                   std::span<const double> fpr_targets, bool score_based) {
  MetricsReport report;
  report.attack = attack;
  report.n_decisions = decisions.size();
  report.accuracy = compute_accuracy(decisions);
  report.advantage = compute_advantage(decisions);
  std::size_t abstains = 0;
  for (const auto& d : decisions)
    if (d.decision == Decision::abstain) ++abstains;
  report.abstain_rate = static_cast<double>(abstains) / static_cast<double>(decisions.size());
  if (score_based) {
    report.roc = compute_roc(scores);
    report.auc = auc_from_roc(report.roc);
    for (double target : fpr_targets) report.tpr_at[target] = tpr_at_fpr(report.roc, target);
  }
  return report;
}

}  // namespace mia
