#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"
#include "mia/rng.hpp"

namespace fixtures {

namespace {

constexpr const char* kSyllableA[] = {"Kar", "Mo", "Tes", "Vel", "Nor", "Bal",
                                      "Dor", "Fen", "Gal", "Hul", "Jas", "Lum"};
constexpr const char* kSyllableB[] = {"ven", "lu", "sa", "do", "vi", "ra",
                                      "mi", "ta", "ne", "ko", "pe", "ri"};
constexpr const char* kSyllableC[] = {"to", "na", "rio", "ra", "la", "del",
                                      "mar", "vik", "sto", "by", "ck", "on"};

constexpr const char* kAdjectives[] = {"ancient", "silver", "northern", "quiet", "vast",
                                       "amber", "rapid", "hollow", "bright", "distant"};
constexpr const char* kNouns[] = {"bridges", "rivers",   "engines", "glaciers", "orchards",
                                  "turbines", "violins", "beacons", "canyons",  "markets",
                                  "temples", "harbors"};
constexpr const char* kTimes[] = {"last spring", "last autumn", "this decade", "last winter",
                                  "this season", "last summer", "this month", "last year"};

std::string unique_name(std::size_t index) {
  std::string name = kSyllableA[index % 12];
  name += kSyllableB[(index / 12) % 12];
  name += kSyllableC[(index / 144) % 12];
  return name;
}

}  // namespace

std::vector<mia::LabeledSample> trec_samples(std::size_t n, std::uint64_t seed) {
  if (n > 1728) throw mia::ConfigError("fixture generator supports at most 1728 samples");
  const std::vector<std::string> labels = {"Number",      "Location", "Person",
                                           "Description", "Entity",   "Abbreviation"};
  mia::Rng rng(mia::derive_seed(seed, "fixture"));
  std::vector<mia::LabeledSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = unique_name(i);
    const std::string adj = kAdjectives[rng.below(std::size(kAdjectives))];
    const std::string noun = kNouns[rng.below(std::size(kNouns))];
    const std::string time = kTimes[rng.below(std::size(kTimes))];
    const std::string& label = labels[i % labels.size()];

    std::string text;
    switch (i % labels.size()) {
      case 0:
        text = "How many " + name + " turbines ran beyond the " + adj + " causeway " + time + "?";
        break;
      case 1:
        text = "Where is " + name + " relative to the " + adj + " " + noun + " crossing?";
        break;
      case 2:
        text = "Who did " + name + " choose to guide the " + adj + " " + noun + " survey?";
        break;
      case 3:
        text = "What makes " + name + " " + noun + " so resilient during " + adj + " seasons?";
        break;
      case 4:
        text = "Which " + name + " product became the " + adj + " emblem at " + noun + " fairs?";
        break;
      default:
        text = "What might " + name + " stand for in the " + adj + " " + noun + " charter?";
        break;
    }
    samples.push_back({std::move(text), label});
  }
  return samples;
}

mia::Dataset trec_dataset(std::size_t n, std::uint64_t seed) {
  mia::DatasetManifest manifest{
      "trec-fixture", mia::LabelSet({"Number", "Location", "Person", "Description", "Entity",
                                     "Abbreviation"})};
  return mia::build_dataset(trec_samples(n, seed), manifest, "fixture");
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<mia::LabeledSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& s : samples) {
    nlohmann::json j = {{"text", s.text}, {"label", s.label}};
    out << j.dump() << '\n';
  }
}

void write_labels_manifest(const std::filesystem::path& path, const std::string& name,
                           const mia::LabelSet& labels) {
  nlohmann::json j = {{"name", name}, {"labels", labels.names()}};
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

DatasetFiles write_trec_fixture(const std::filesystem::path& dir, std::size_t n,
                                std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  DatasetFiles files{dir / "data.jsonl", dir / "labels.json"};
  auto samples = trec_samples(n, seed);
  write_jsonl(files.data, samples);
  write_labels_manifest(files.manifest, "trec-fixture",
                        mia::LabelSet({"Number", "Location", "Person", "Description", "Entity",
                                       "Abbreviation"}));
  return files;
}

std::filesystem::path temp_dir(const std::string& hint) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("mia_test_" + hint + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
