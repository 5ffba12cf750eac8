#include "mia/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "mia/errors.hpp"
#include "mia/http_provider.hpp"
#include "mia/rng.hpp"

namespace mia {

namespace {

// Attacks run in a fixed order so query ledgers and conversation seeds do
// not depend on the configured attack list.
constexpr AttackKind kAttackOrder[] = {AttackKind::gap, AttackKind::inquiry, AttackKind::repeat,
                                       AttackKind::brainwash};

}  // namespace

bool is_score_based(AttackKind kind) {
  return kind == AttackKind::repeat || kind == AttackKind::brainwash ||
         kind == AttackKind::hybrid;
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();

  DatasetManifest manifest = load_dataset_manifest(config_.dataset_manifest);
  dataset_ = load_dataset(config_.dataset_path, config_.dataset_format, manifest,
                          config_.tsv_header);
  split_ = split_dataset(dataset_, config_.demo_fraction, derive_seed(config_.master_seed, "split"));

  template_ = config_.template_manifest ? load_template_manifest(*config_.template_manifest)
                                        : builtin_template(config_.template_id);
  for (const auto& sample : dataset_.samples)
    if (!template_.labels.contains(sample.label))
      throw ConfigError("dataset label \"" + sample.label + "\" not present in template \"" +
                        template_.id + "\"");

  if (config_.defense.synthetic_demos_path) {
    synthetic_demos_ =
        load_synthetic_demos(*config_.defense.synthetic_demos_path, template_.labels,
                             config_.defense.synthetic_demos_format);
    if (synthetic_demos_.size() < static_cast<std::size_t>(config_.k))
      throw ConfigError("synthetic demo pool smaller than k");
  }

  if (config_.provider.kind == ProviderConfig::Kind::simulated) {
    base_provider_ = std::make_unique<SimulatedProvider>(config_.simulator, template_,
                                                         AnswerKey(dataset_.samples));
  } else {
    base_provider_ = std::make_unique<HttpProvider>(config_.provider);
  }

  if (config_.defense.filter_defense)
    paraphraser_ = std::make_unique<ShufflingParaphraser>(config_.paraphraser_seed);
  if (config_.defense.filter_defense || config_.defense.label_whitelist)
    defended_provider_ = std::make_unique<DefendedProvider>(*base_provider_, paraphraser_.get(),
                                                            config_.defense, template_.labels);

  if (config_.encoder.kind == EncoderConfig::Kind::local) {
    encoder_ = std::make_unique<LocalTrigramEncoder>(config_.encoder.buckets);
  } else {
    encoder_ = std::make_unique<HttpEncoder>(config_.encoder.http);
  }
}

Provider& Experiment::target_provider() {
  return defended_provider_ ? *defended_provider_ : *base_provider_;
}

BuiltPrompt Experiment::build_prompt(const TrialInputs& inputs) {
  // Defense order is fixed: data substitution, then the instruction suffix.
  // Output-level defenses live in the provider wrapper.
  std::vector<LabeledSample> demos = inputs.demonstrations;
  if (!synthetic_demos_.empty()) {
    Rng rng(derive_seed(inputs.trial_seed, "synthetic"));
    std::vector<std::size_t> idx(synthetic_demos_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < demos.size(); ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
      demos[i] = synthetic_demos_[idx[i]];
    }
  }
  BuiltPrompt prompt = render_prompt(template_, std::move(demos));
  if (config_.defense.instruction_defense)
    prompt = apply_instruction_defense(template_, std::move(prompt));
  return prompt;
}

AttackOutcome Experiment::attack_target(AttackKind kind, const BuiltPrompt& prompt,
                                        const LabeledSample& target) {
  Provider& provider = target_provider();
  switch (kind) {
    case AttackKind::gap:
      return gap_attack(provider, template_, prompt, target.text, target.label);
    case AttackKind::inquiry:
      return inquiry_attack(provider, prompt, target.text);
    case AttackKind::repeat:
      return repeat_attack(provider, *encoder_, prompt, target.text, config_.repeat);
    case AttackKind::brainwash:
      return brainwash_attack(provider, template_, prompt, target.text, target.label,
                              config_.brainwash);
    default:
      throw ValidationError("attack_target: unsupported attack kind");
  }
}

TrialRecord Experiment::run_trial(int trial_index, const HybridModel* hybrid) {
  auto started = std::chrono::steady_clock::now();
  TrialRecord record;
  record.trial_index = trial_index;
  record.inputs = sample_trial_inputs(
      split_, static_cast<std::size_t>(config_.k),
      config_.target_position.resolve(static_cast<std::size_t>(config_.k)),
      derive_seed(config_.master_seed, "trial", static_cast<std::uint64_t>(trial_index)));

  bool wants_hybrid = config_.wants(AttackKind::hybrid);
  try {
    BuiltPrompt prompt = build_prompt(record.inputs);

    for (AttackKind kind : kAttackOrder) {
      if (!config_.wants(kind) && !(wants_hybrid && (kind == AttackKind::repeat ||
                                                     kind == AttackKind::brainwash)))
        continue;
      TargetOutcomes outcomes;
      outcomes.member = attack_target(kind, prompt, record.inputs.member_target);
      outcomes.nonmember = attack_target(kind, prompt, record.inputs.nonmember_target);
      record.queries_total += outcomes.member.queries_used + outcomes.nonmember.queries_used;
      record.outcomes.emplace(kind, std::move(outcomes));
    }

    if (wants_hybrid) {
      if (hybrid == nullptr) throw ConfigError("hybrid attack requested without a trained model");
      const auto& repeat = record.outcomes.at(AttackKind::repeat);
      const auto& brainwash = record.outcomes.at(AttackKind::brainwash);
      TargetOutcomes outcomes;
      outcomes.member =
          hybrid_predict(*hybrid, extract_features(repeat.member, brainwash.member));
      outcomes.nonmember =
          hybrid_predict(*hybrid, extract_features(repeat.nonmember, brainwash.nonmember));
      record.outcomes.emplace(AttackKind::hybrid, std::move(outcomes));
    }
  } catch (const ProviderError& e) {
    record.failed = true;
    record.failure = e.what();
  } catch (const AttackError& e) {
    record.failed = true;
    record.failure = e.what();
  }

  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return record;
}

ShadowData Experiment::collect_shadow(int n_shadow_trials) {
  ShadowData shadow;
  for (int i = 0; i < n_shadow_trials; ++i) {
    TrialInputs inputs = sample_trial_inputs(
        split_, static_cast<std::size_t>(config_.k),
        config_.target_position.resolve(static_cast<std::size_t>(config_.k)),
        derive_seed(config_.master_seed, "shadow", static_cast<std::uint64_t>(i)));
    BuiltPrompt prompt = build_prompt(inputs);

    for (bool member : {true, false}) {
      const LabeledSample& target = member ? inputs.member_target : inputs.nonmember_target;
      AttackOutcome repeat =
          repeat_attack(target_provider(), *encoder_, prompt, target.text, config_.repeat);
      AttackOutcome brainwash = brainwash_attack(target_provider(), template_, prompt,
                                                 target.text, target.label, config_.brainwash);
      shadow.samples.push_back({extract_features(repeat, brainwash), member});
      shadow.scores[AttackKind::repeat].push_back({repeat.raw_score, member});
      shadow.scores[AttackKind::brainwash].push_back({brainwash.raw_score, member});
    }
  }
  return shadow;
}

ExperimentResult Experiment::run() {
  ExperimentResult result;

  const HybridModel* hybrid = nullptr;
  if (config_.wants(AttackKind::hybrid)) {
    if (config_.hybrid_model_path) {
      result.hybrid_model = load_hybrid_model(*config_.hybrid_model_path);
    } else {
      ShadowData shadow = collect_shadow(config_.shadow_trials);
      result.hybrid_model = train_hybrid(shadow.samples, config_.hybrid).model;
    }
    hybrid = &*result.hybrid_model;
  }

  const int n = config_.n_trials;
  result.trials.resize(static_cast<std::size_t>(n));
  if (config_.parallelism <= 1) {
    for (int i = 0; i < n; ++i) result.trials[static_cast<std::size_t>(i)] = run_trial(i, hybrid);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          result.trials[static_cast<std::size_t>(i)] = run_trial(i, hybrid);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> threads;
    int n_threads = std::min(config_.parallelism, n);
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (const auto& trial : result.trials)
    if (trial.failed) ++result.failed_trials;
  if (result.failed_trials * 10 > result.trials.size())
    throw ExperimentError(std::to_string(result.failed_trials) + " of " +
                          std::to_string(result.trials.size()) +
                          " trials failed (more than 10%)");

  result.reports = metrics_from_trials(result.trials, config_.attacks, config_.fpr_targets);
  result.ledger = base_provider_->ledger().snapshot();
  return result;
}

std::vector<DecidedTruth> decisions_for(const std::vector<TrialRecord>& trials, AttackKind kind) {
  std::vector<DecidedTruth> decisions;
  for (const auto& trial : trials) {
    if (trial.failed) continue;
    auto it = trial.outcomes.find(kind);
    if (it == trial.outcomes.end()) continue;
    decisions.push_back({it->second.member.decision, true});
    decisions.push_back({it->second.nonmember.decision, false});
  }
  return decisions;
}

std::vector<ScoredTruth> scores_for(const std::vector<TrialRecord>& trials, AttackKind kind) {
  std::vector<ScoredTruth> scores;
  for (const auto& trial : trials) {
    if (trial.failed) continue;
    auto it = trial.outcomes.find(kind);
    if (it == trial.outcomes.end()) continue;
    scores.push_back({it->second.member.raw_score, true});
    scores.push_back({it->second.nonmember.raw_score, false});
  }
  return scores;
}

std::vector<MetricsReport> metrics_from_trials(const std::vector<TrialRecord>& trials,
                                               const std::vector<AttackKind>& attacks,
                                               const std::vector<double>& fpr_targets) {
  std::vector<MetricsReport> reports;
  for (AttackKind kind : attacks) {
    auto decisions = decisions_for(trials, kind);
    if (decisions.empty())
      throw ExperimentError("no usable trials for attack " + std::string(to_string(kind)));
    auto scores = scores_for(trials, kind);
    reports.push_back(
        build_metrics_report(kind, decisions, scores, fpr_targets, is_score_based(kind)));
  }
  return reports;
}

}  // namespace mia
