#pragma once

// Datasets, deduplication, demo/test splitting, and per-trial target
// sampling. All operations are pure functions of their inputs and seeds.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mia {

// One (text, label) pair; the unit of membership.
struct LabeledSample {
  std::string text;
  std::string label;

  bool operator==(const LabeledSample&) const = default;
};

// Ordered, distinct label names. At least two.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool contains(std::string_view name) const;
  // Index in declaration order; throws ValidationError if absent.
  std::size_t index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

struct Dataset {
  std::string name;
  std::vector<LabeledSample> samples;
  LabelSet label_set;
  std::size_t duplicates_removed = 0;
};

struct DatasetSplit {
  std::vector<LabeledSample> demo_pool;
  std::vector<LabeledSample> test_pool;
  std::uint64_t seed = 0;
};

struct TrialInputs {
  std::vector<LabeledSample> demonstrations;
  std::size_t target_position = 0;
  LabeledSample member_target;     // == demonstrations[target_position]
  LabeledSample nonmember_target;  // drawn from the test pool
  std::uint64_t trial_seed = 0;
};

enum class DatasetFormat { tsv, jsonl };

DatasetFormat dataset_format_from(std::string_view name);
std::string_view to_string(DatasetFormat);

// Label-set sidecar: {"name": string, "labels": [string, ...]}.
struct DatasetManifest {
  std::string name;
  LabelSet labels;
};
DatasetManifest load_dataset_manifest(const std::filesystem::path& path);

// Loads, validates against the manifest's label set, and deduplicates by
// normalized text (first occurrence wins; removals counted).
Dataset load_dataset(const std::filesystem::path& data_path, DatasetFormat format,
                     const DatasetManifest& manifest, bool tsv_header = false);

// Parses records already in memory; `source` names the origin for errors.
Dataset build_dataset(std::vector<LabeledSample> records, const DatasetManifest& manifest,
                      std::string_view source);

// Deterministic disjoint partition. Demo pool gets floor(fraction * n),
// clamped so both pools are non-empty.
DatasetSplit split_dataset(const Dataset& dataset, double demo_fraction, std::uint64_t seed);

// k distinct demonstrations from the demo pool, a uniform nonmember from the
// test pool; member target sits at target_position.
TrialInputs sample_trial_inputs(const DatasetSplit& split, std::size_t k,
                                std::size_t target_position, std::uint64_t trial_seed);

}  // namespace mia
