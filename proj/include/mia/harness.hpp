#pragma once

// The evaluation protocol: repeated trials over (member, nonmember) target
// pairs, shadow collection for calibration, and per-attack metrics.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mia/config.hpp"
#include "mia/dataset.hpp"
#include "mia/metrics.hpp"

namespace mia {

struct TargetOutcomes {
  AttackOutcome member;
  AttackOutcome nonmember;
};

struct TrialRecord {
  int trial_index = 0;
  TrialInputs inputs;
  std::map<AttackKind, TargetOutcomes> outcomes;
  long long queries_total = 0;
  bool failed = false;
  std::string failure;
  double elapsed_ms = 0.0;  // in-memory only; never serialized
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  // trial-index order, independent of schedule
  std::vector<MetricsReport> reports;
  std::size_t failed_trials = 0;
  LedgerSnapshot ledger;
  std::optional<HybridModel> hybrid_model;
};

// Raw shadow material for threshold calibration and hybrid training.
struct ShadowData {
  std::vector<ShadowSample> samples;  // one per target (2 per shadow trial)
  std::map<AttackKind, std::vector<ScoredTruth>> scores;
};

class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const PromptTemplate& prompt_template() const { return template_; }
  const Dataset& dataset() const { return dataset_; }
  const DatasetSplit& split() const { return split_; }

  // One trial, deterministic in (master_seed, trial_index). `hybrid` may be
  // null when the hybrid attack is not configured.
  TrialRecord run_trial(int trial_index, const HybridModel* hybrid = nullptr);

  // Shadow trials use a seed stream disjoint from evaluation trials.
  ShadowData collect_shadow(int n_shadow_trials);

  ExperimentResult run();

 private:
  BuiltPrompt build_prompt(const TrialInputs& inputs);
  AttackOutcome attack_target(AttackKind kind, const BuiltPrompt& prompt,
                              const LabeledSample& target);
  Provider& target_provider();

  ExperimentConfig config_;
  Dataset dataset_;
  DatasetSplit split_;
  PromptTemplate template_;
  std::vector<LabeledSample> synthetic_demos_;
  std::unique_ptr<Provider> base_provider_;
  std::unique_ptr<Provider> paraphraser_;
  std::unique_ptr<Provider> defended_provider_;
  std::unique_ptr<Encoder> encoder_;
};

// Decision/score extraction shared with the CLI and tests.
std::vector<DecidedTruth> decisions_for(const std::vector<TrialRecord>& trials, AttackKind kind);
std::vector<ScoredTruth> scores_for(const std::vector<TrialRecord>& trials, AttackKind kind);
bool is_score_based(AttackKind kind);

std::vector<MetricsReport> metrics_from_trials(const std::vector<TrialRecord>& trials,
                                               const std::vector<AttackKind>& attacks,
                                               const std::vector<double>& fpr_targets);

}  // namespace mia
