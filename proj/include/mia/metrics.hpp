#pragma once

// Evaluation metrics: accuracy/advantage over balanced decisions, ROC from
// raw scores with grouped ties, TPR at fixed FPR, and threshold calibration.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mia/attack_kind.hpp"
#include "mia/attacks.hpp"

namespace mia {

struct ScoredTruth {
  double score = 0.0;
  bool is_member = false;
};

struct DecidedTruth {
  Decision decision = Decision::abstain;
  bool is_member = false;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Abstains count as nonmember decisions (conservative for the attacker).
double compute_accuracy(std::span<const DecidedTruth> decisions);

// Adv = 2 x (Acc - 0.5).
double compute_advantage(std::span<const DecidedTruth> decisions);

// Threshold sweep over distinct scores, descending, ties grouped; includes
// (0,0) and (1,1). Throws MetricError unless both classes are present.
std::vector<RocPoint> compute_roc(std::span<const ScoredTruth> scores);

// Trapezoidal area; on a grouped-tie step curve this equals the pairwise
// statistic P(score_m > score_n) + 1/2 P(=).
double auc_from_roc(const std::vector<RocPoint>& roc);

// Max TPR among points with fpr <= target; 0 when only the origin qualifies.
double tpr_at_fpr(const std::vector<RocPoint>& roc, double target_fpr);

// Accuracy-maximizing threshold for the rule `score >= theta`. Candidates
// are the distinct observed scores plus one sentinel above the maximum;
// ties resolve to the smallest candidate.
double calibrate_threshold(std::span<const ScoredTruth> scores);

struct MetricsReport {
  AttackKind attack = AttackKind::other;
  std::size_t n_decisions = 0;
  double accuracy = 0.0;
  double advantage = 0.0;
  double abstain_rate = 0.0;
  std::optional<double> auc;  // score-based attacks only
  std::vector<RocPoint> roc;
  std::map<double, double> tpr_at;  // target fpr -> tpr
};

MetricsReport build_metrics_report(AttackKind attack, std::span<const DecidedTruth> decisions,
                                   std::span<const ScoredTruth> scores,
                                   std::span<const double> fpr_targets, bool score_based);

}  // namespace mia
