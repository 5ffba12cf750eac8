#pragma once

// Deterministic TREC-style fixture data. Every sample embeds a unique
// pseudo-name in its first three words, so repeat-attack prefixes identify
// exactly one sample.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mia/dataset.hpp"

namespace fixtures {

std::vector<mia::LabeledSample> trec_samples(std::size_t n, std::uint64_t seed = 7);
mia::Dataset trec_dataset(std::size_t n, std::uint64_t seed = 7);

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<mia::LabeledSample>& samples);
void write_labels_manifest(const std::filesystem::path& path, const std::string& name,
                           const mia::LabelSet& labels);

// Writes <dir>/data.jsonl and <dir>/labels.json; returns the pair of paths.
struct DatasetFiles {
  std::filesystem::path data;
  std::filesystem::path manifest;
};
DatasetFiles write_trec_fixture(const std::filesystem::path& dir, std::size_t n,
                                std::uint64_t seed = 7);

// Fresh unique directory under the system temp dir; created, not cleaned.
std::filesystem::path temp_dir(const std::string& hint);

}  // namespace fixtures
