#pragma once

// Experiment configuration: the TOML schema, defaults, validation, and the
// JSON form recorded in run manifests.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mia/attacks.hpp"
#include "mia/defenses.hpp"
#include "mia/embedding.hpp"
#include "mia/hybrid.hpp"
#include "mia/provider.hpp"
#include "mia/sim_provider.hpp"
#include "mia/toml.hpp"

namespace mia {

struct PositionSpec {
  enum class Mode { index, first, last };
  Mode mode = Mode::last;
  std::size_t index = 0;

  std::size_t resolve(std::size_t k) const;
  std::string str() const;
  static PositionSpec parse(const std::string& text);
};

struct EncoderConfig {
  enum class Kind { local, http } kind = Kind::local;
  std::size_t buckets = 4096;
  HttpEncoderConfig http;
};

struct ExperimentConfig {
  // [experiment]
  int n_trials = 500;
  int k = 1;
  PositionSpec target_position;
  std::vector<AttackKind> attacks = {AttackKind::gap, AttackKind::inquiry, AttackKind::repeat,
                                     AttackKind::brainwash};
  std::string template_id = "trec";
  std::optional<std::filesystem::path> template_manifest;
  std::uint64_t master_seed = 42;
  std::vector<double> fpr_targets = {0.01, 0.05, 0.1};
  int parallelism = 1;
  int shadow_trials = 50;  // 2 targets per trial: 100 shadow samples

  // [dataset]
  std::filesystem::path dataset_path;
  DatasetFormat dataset_format = DatasetFormat::jsonl;
  std::filesystem::path dataset_manifest;
  bool tsv_header = false;
  double demo_fraction = 0.5;

  // [provider] / [simulator]
  ProviderConfig provider;
  SimulatedTargetParams simulator;

  // [attack.*]
  RepeatConfig repeat;
  BrainwashConfig brainwash;
  HybridTrainConfig hybrid;
  std::optional<std::filesystem::path> hybrid_model_path;

  // [defense]
  DefenseConfig defense;
  std::uint64_t paraphraser_seed = 211;

  // [embedding]
  EncoderConfig encoder;

  void validate() const;
  bool wants(AttackKind kind) const;
};

// Relative paths resolve against base_dir (the config file's directory).
ExperimentConfig config_from_toml(const toml::Table& table,
                                  const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& config);

std::vector<AttackKind> parse_attack_list(const std::string& csv);

}  // namespace mia
