#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mia/errors.hpp"
#include "mia/metrics.hpp"
#include "mia/rng.hpp"

using namespace mia;

namespace {

// Brute-force pairwise AUC: P(score_m > score_n) + 1/2 P(equal).
double pairwise_auc(const std::vector<ScoredTruth>& scores) {
  double wins = 0, ties = 0;
  std::size_t pairs = 0;
  for (const auto& m : scores) {
    if (!m.is_member) continue;
    for (const auto& n : scores) {
      if (n.is_member) continue;
      ++pairs;
      if (m.score > n.score) ++wins;
      else if (m.score == n.score) ++ties;
    }
  }
  return (wins + 0.5 * ties) / static_cast<double>(pairs);
}

// Exhaustive scan over all thresholds: max TPR subject to FPR <= target.
double exhaustive_tpr_at_fpr(const std::vector<ScoredTruth>& scores, double target) {
  std::vector<double> thresholds;
  for (const auto& s : scores) thresholds.push_back(s.score);
  thresholds.push_back(*std::max_element(thresholds.begin(), thresholds.end()) + 1.0);
  double members = 0, nonmembers = 0;
  for (const auto& s : scores) (s.is_member ? members : nonmembers)++;
  double best = 0.0;
  for (double theta : thresholds) {
    double tp = 0, fp = 0;
    for (const auto& s : scores) {
      if (s.score >= theta) (s.is_member ? tp : fp)++;
    }
    if (fp / nonmembers <= target) best = std::max(best, tp / members);
  }
  return best;
}

}  // namespace

TEST_CASE("advantage fixtures") {
  std::vector<DecidedTruth> half = {{Decision::member, true}, {Decision::member, false}};
  CHECK(compute_advantage(half) == doctest::Approx(0.0));

  std::vector<DecidedTruth> perfect = {{Decision::member, true}, {Decision::nonmember, false}};
  CHECK(compute_advantage(perfect) == doctest::Approx(1.0));
}

TEST_CASE("advantage reproduces the worked accuracy 0.906 -> 0.812") {
  std::vector<DecidedTruth> decisions;
  for (int i = 0; i < 1000; ++i) {
    bool truth = i % 2 == 0;
    bool correct = i < 906;
    Decision d = (truth == correct) ? Decision::member : Decision::nonmember;
    decisions.push_back({d, truth});
  }
  CHECK(compute_accuracy(decisions) == doctest::Approx(0.906).epsilon(1e-12));
  CHECK(compute_advantage(decisions) == doctest::Approx(0.812).epsilon(1e-12));
}

TEST_CASE("abstains count as nonmember decisions") {
  std::vector<DecidedTruth> decisions = {{Decision::abstain, true},     // wrong
                                         {Decision::abstain, false},    // right
                                         {Decision::member, true},      // right
                                         {Decision::nonmember, false}}; // right
  CHECK(compute_accuracy(decisions) == doctest::Approx(0.75));
}

TEST_CASE("perfectly separated scores: ROC through (0,1), AUC 1") {
  std::vector<ScoredTruth> scores = {{0.9, true}, {0.8, true}, {0.2, false}, {0.1, false}};
  auto roc = compute_roc(scores);
  CHECK(roc.front().fpr == 0.0);
  CHECK(roc.front().tpr == 0.0);
  CHECK(roc.back().fpr == 1.0);
  CHECK(roc.back().tpr == 1.0);
  bool hits_corner = false;
  for (const auto& p : roc)
    if (p.fpr == 0.0 && p.tpr == 1.0) hits_corner = true;
  CHECK(hits_corner);
  CHECK(auc_from_roc(roc) == doctest::Approx(1.0));
}

TEST_CASE("identical scores: diagonal ROC, AUC 0.5") {
  std::vector<ScoredTruth> scores = {{0.5, true}, {0.5, false}, {0.5, true}, {0.5, false}};
  auto roc = compute_roc(scores);
  REQUIRE(roc.size() == 2);  // (0,0) then (1,1): the tie group collapses
  CHECK(auc_from_roc(roc) == doctest::Approx(0.5));
  CHECK(tpr_at_fpr(roc, 0.01) == doctest::Approx(0.0));  // only the origin qualifies
}

TEST_CASE("the 8/9 fixture") {
  std::vector<ScoredTruth> scores = {{0.9, true},  {0.8, true},  {0.3, true},
                                     {0.7, false}, {0.2, false}, {0.1, false}};
  auto roc = compute_roc(scores);
  CHECK(auc_from_roc(roc) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(auc_from_roc(roc) == doctest::Approx(pairwise_auc(scores)).epsilon(1e-12));
  // max TPR with fpr <= 1/3: threshold 0.3 catches all members at fpr exactly
  // 1/3, so the exhaustive scan yields 1.0.
  CHECK(tpr_at_fpr(roc, 1.0 / 3.0) ==
        doctest::Approx(exhaustive_tpr_at_fpr(scores, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(tpr_at_fpr(roc, 1.0 / 3.0) == doctest::Approx(1.0));
  // strictly below the first nonmember score the curve is still climbing
  CHECK(tpr_at_fpr(roc, 0.2) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("perfect ROC at tiny fpr targets") {
  std::vector<ScoredTruth> scores = {{0.9, true}, {0.8, true}, {0.2, false}, {0.1, false}};
  auto roc = compute_roc(scores);
  CHECK(tpr_at_fpr(roc, 0.01) == doctest::Approx(1.0));
}

TEST_CASE("roc rejects single-class inputs") {
  std::vector<ScoredTruth> members_only = {{0.9, true}, {0.8, true}};
  CHECK_THROWS_AS(compute_roc(members_only), MetricError);
}

TEST_CASE("roc is monotone and anchored for random inputs") {
  Rng rng(404);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<ScoredTruth> scores;
    std::size_t n = 2 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i)
      scores.push_back({std::round(rng.uniform() * 8) / 8.0, rng.bernoulli(0.5)});
    scores.push_back({0.3, true});
    scores.push_back({0.4, false});
    auto roc = compute_roc(scores);
    CHECK(roc.front().fpr == 0.0);
    CHECK(roc.front().tpr == 0.0);
    CHECK(roc.back().fpr == 1.0);
    CHECK(roc.back().tpr == 1.0);
    for (std::size_t i = 1; i < roc.size(); ++i) {
      CHECK(roc[i].fpr >= roc[i - 1].fpr);
      CHECK(roc[i].tpr >= roc[i - 1].tpr);
    }
    CHECK(auc_from_roc(roc) == doctest::Approx(pairwise_auc(scores)).epsilon(1e-12));
  }
}

TEST_CASE("calibrate_threshold fixtures") {
  std::vector<ScoredTruth> separated;
  for (int i = 0; i < 5; ++i) {
    separated.push_back({1.0, true});
    separated.push_back({0.0, false});
  }
  double theta = calibrate_threshold(separated);
  CHECK(theta > 0.0);
  CHECK(theta <= 1.0);
  // accuracy 1.0 at the calibrated threshold
  int correct = 0;
  for (const auto& s : separated)
    if ((s.score >= theta) == s.is_member) ++correct;
  CHECK(correct == 10);

  std::vector<ScoredTruth> identical = {{0.4, true}, {0.4, false}, {0.4, true}, {0.4, false}};
  CHECK(calibrate_threshold(identical) == doctest::Approx(0.4));

  std::vector<ScoredTruth> members_only = {{0.9, true}};
  CHECK_THROWS_AS(calibrate_threshold(members_only), CalibrationError);
}

TEST_CASE("calibrate_threshold picks the smallest maximizer") {
  // Thresholds 0.5 and 0.7 tie at accuracy 3/4; the smaller one wins.
  std::vector<ScoredTruth> scores = {{0.7, true}, {0.5, true}, {0.5, false}, {0.1, false}};
  double theta = calibrate_threshold(scores);
  CHECK(theta == doctest::Approx(0.5));
}

TEST_CASE("metrics identity holds on random decision sets") {
  Rng rng(777);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<DecidedTruth> decisions;
    std::size_t n = 1 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      Decision d = static_cast<Decision>(rng.below(3));
      decisions.push_back({d, rng.bernoulli(0.5)});
    }
    double acc = compute_accuracy(decisions);
    double adv = compute_advantage(decisions);
    CHECK(std::abs(adv - (2.0 * acc - 1.0)) < 1e-12);
  }
}

TEST_CASE("metrics report aggregates abstains and tpr targets") {
  std::vector<DecidedTruth> decisions = {{Decision::member, true},
                                         {Decision::abstain, false},
                                         {Decision::member, true},
                                         {Decision::nonmember, false}};
  std::vector<ScoredTruth> scores = {{0.9, true}, {0.2, false}, {0.8, true}, {0.1, false}};
  std::vector<double> targets = {0.01, 0.1};
  MetricsReport report =
      build_metrics_report(AttackKind::repeat, decisions, scores, targets, true);
  CHECK(report.abstain_rate == doctest::Approx(0.25));
  CHECK(report.accuracy == doctest::Approx(1.0));
  REQUIRE(report.auc.has_value());
  CHECK(*report.auc == doctest::Approx(1.0));
  CHECK(report.tpr_at.at(0.01) == doctest::Approx(1.0));
}
