#include "mia/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"
#include "mia/rng.hpp"
#include "mia/text.hpp"

namespace mia {

using nlohmann::json;

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw ValidationError("label set needs at least 2 labels");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("label set contains an empty name");
    if (!seen.insert(n).second) throw ValidationError("duplicate label name: " + n);
  }
}

bool LabelSet::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t LabelSet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown label: " + std::string(name));
  return static_cast<std::size_t>(it - names_.begin());
}

DatasetFormat dataset_format_from(std::string_view name) {
  if (name == "tsv") return DatasetFormat::tsv;
  if (name == "jsonl") return DatasetFormat::jsonl;
  throw ConfigError("unknown dataset format: " + std::string(name));
}

std::string_view to_string(DatasetFormat f) {
  return f == DatasetFormat::tsv ? "tsv" : "jsonl";
}

DatasetManifest load_dataset_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("labels"))
    throw ParseError(path.string() + ": manifest needs \"name\" and \"labels\"");
  std::vector<std::string> labels;
  for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
  return DatasetManifest{j.at("name").get<std::string>(), LabelSet(std::move(labels))};
}

namespace {

std::vector<LabeledSample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path.string());
  std::vector<LabeledSample> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j.contains("label") ||
        !j.at("text").is_string() || !j.at("label").is_string())
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": record needs string fields \"text\" and \"label\"");
    records.push_back({j.at("text").get<std::string>(), j.at("label").get<std::string>()});
  }
  return records;
}

std::vector<LabeledSample> read_tsv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path.string());
  std::vector<LabeledSample> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    // Text may contain tabs; the label never does, so split at the last one.
    auto tab = line.find_last_of('\t');
    if (tab == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected text<TAB>label");
    records.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return records;
}

}  // namespace

Dataset build_dataset(std::vector<LabeledSample> records, const DatasetManifest& manifest,
                      std::string_view source) {
  Dataset ds;
  ds.name = manifest.name;
  ds.label_set = manifest.labels;
  std::unordered_set<std::string> seen;
  std::size_t recno = 0;
  for (auto& rec : records) {
    ++recno;
    std::string norm = normalize_text(rec.text);
    if (norm.empty())
      throw ValidationError(std::string(source) + ": record " + std::to_string(recno) +
                            " has empty text");
    if (!ds.label_set.contains(rec.label))
      throw ValidationError(std::string(source) + ": record " + std::to_string(recno) +
                            " has label \"" + rec.label + "\" outside the declared label set");
    if (!seen.insert(std::move(norm)).second) {
      ++ds.duplicates_removed;
      continue;
    }
    ds.samples.push_back(std::move(rec));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& data_path, DatasetFormat format,
                     const DatasetManifest& manifest, bool tsv_header) {
  auto records = format == DatasetFormat::jsonl ? read_jsonl(data_path)
                                                : read_tsv(data_path, tsv_header);
  return build_dataset(std::move(records), manifest, data_path.string());
}

DatasetSplit split_dataset(const Dataset& dataset, double demo_fraction, std::uint64_t seed) {
  if (dataset.samples.empty()) throw ConfigError("cannot split an empty dataset");
  if (!(demo_fraction > 0.0 && demo_fraction < 1.0))
    throw ConfigError("demo_fraction must lie in (0,1)");
  const std::size_t n = dataset.samples.size();
  if (n < 2) throw ConfigError("dataset too small to split: need at least 2 samples");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(order);

  auto n_demo = static_cast<std::size_t>(demo_fraction * static_cast<double>(n));
  n_demo = std::clamp<std::size_t>(n_demo, 1, n - 1);

  DatasetSplit split;
  split.seed = seed;
  split.demo_pool.reserve(n_demo);
  split.test_pool.reserve(n - n_demo);
  for (std::size_t i = 0; i < n; ++i)
    (i < n_demo ? split.demo_pool : split.test_pool).push_back(dataset.samples[order[i]]);
  return split;
}

TrialInputs sample_trial_inputs(const DatasetSplit& split, std::size_t k,
                                std::size_t target_position, std::uint64_t trial_seed) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k > split.demo_pool.size())
    throw ConfigError("k=" + std::to_string(k) + " exceeds demo pool size " +
                      std::to_string(split.demo_pool.size()));
  if (split.test_pool.empty()) throw ConfigError("test pool is empty");
  if (target_position >= k)
    throw ConfigError("target_position " + std::to_string(target_position) +
                      " out of range for k=" + std::to_string(k));

  Rng rng(derive_seed(trial_seed, "trial"));

  // Partial Fisher-Yates: first k slots of the index permutation.
  std::vector<std::size_t> idx(split.demo_pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }

  TrialInputs inputs;
  inputs.trial_seed = trial_seed;
  inputs.target_position = target_position;
  inputs.demonstrations.reserve(k);
  for (std::size_t i = 0; i < k; ++i) inputs.demonstrations.push_back(split.demo_pool[idx[i]]);
  inputs.member_target = inputs.demonstrations[target_position];
  inputs.nonmember_target = split.test_pool[rng.below(split.test_pool.size())];
  return inputs;
}

}  // namespace mia
