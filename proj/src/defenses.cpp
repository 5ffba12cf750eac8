#include "mia/defenses.hpp"

#include <algorithm>
#include <iostream>

#include "mia/attacks.hpp"
#include "mia/errors.hpp"
#include "mia/rng.hpp"
#include "mia/text.hpp"

namespace mia {

BuiltPrompt apply_instruction_defense(const PromptTemplate& tmpl, BuiltPrompt prompt) {
  if (prompt.defense_suffix && *prompt.defense_suffix == kDefenseInstruction)
    return prompt;  // idempotent
  return render_prompt(tmpl, std::move(prompt.demonstrations),
                       std::string(kDefenseInstruction));
}

std::string filter_rewrite(Provider& paraphraser, const std::string& response,
                           FilterFallback fallback) {
  if (response.empty()) throw ValidationError("filter_rewrite: empty response");
  try {
    GenerationRequest request;
    request.context.template_id = "paraphrase";
    request.context.rendered_context = "Rewrite the following sentence.";
    request.turns = {{Role::user, response}};
    std::string rewritten = paraphraser.generate(request);
    if (rewritten.empty()) throw ProviderError(ProviderError::Kind::empty_response,
                                               "paraphraser returned nothing");
    return rewritten;
  } catch (const ProviderError& e) {
    if (fallback == FilterFallback::pass_through) {
      std::cerr << "warning: paraphraser failed (" << e.what() << "); passing response through\n";
      return response;
    }
    throw;
  }
}

std::vector<LabeledSample> load_synthetic_demos(const std::filesystem::path& path,
                                                const LabelSet& expected_labels,
                                                DatasetFormat format) {
  DatasetManifest manifest{"synthetic", expected_labels};
  Dataset ds = load_dataset(path, format, manifest);
  if (ds.samples.empty())
    throw ConfigError("synthetic demo file is empty: " + path.string());
  return std::move(ds.samples);
}

namespace {

// Small stop-word synonym table; applied before shuffling.
constexpr std::pair<std::string_view, std::string_view> kSynonyms[] = {
    {"the", "a"},   {"a", "the"},      {"is", "was"},  {"was", "is"},   {"of", "from"},
    {"from", "of"}, {"in", "inside"},  {"on", "upon"}, {"and", "plus"}, {"to", "toward"},
    {"with", "alongside"}, {"for", "regarding"}, {"at", "near"}, {"by", "beside"},
    {"this", "that"}, {"that", "this"}};

}  // namespace

std::string ShufflingParaphraser::rewrite(std::uint64_t seed, std::string_view text) {
  auto words = split_words(text);
  if (words.empty()) return std::string(text);

  Rng rng(derive_seed(seed, normalize_text(text), "paraphrase"));
  for (auto& w : words) {
    std::string lower = to_lower_ascii(w);
    for (const auto& [from, to] : kSynonyms) {
      if (lower == from) {
        w = to;
        break;
      }
    }
  }
  rng.shuffle(words);

  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  if (out == text) {  // degenerate shuffle on tiny inputs: rotate by one
    std::rotate(words.begin(), words.begin() + 1, words.end());
    out.clear();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) out += ' ';
      out += words[i];
    }
    if (out == text) out += " indeed";
  }
  return out;
}

std::string ShufflingParaphraser::generate_impl(const GenerationRequest& request) {
  return rewrite(seed_, request.turns.back().content);
}

DefendedProvider::DefendedProvider(Provider& inner, Provider* paraphraser,
                                   const DefenseConfig& config, LabelSet labels)
    : inner_(inner), paraphraser_(paraphraser), config_(config), labels_(std::move(labels)) {
  if (config_.filter_defense && paraphraser_ == nullptr)
    throw ConfigError("filter defense enabled without a paraphraser");
}

std::string DefendedProvider::generate_impl(const GenerationRequest& request) {
  std::string response = inner_.generate(request);
  if (config_.filter_defense && request.attack == AttackKind::repeat)
    return filter_rewrite(*paraphraser_, response, config_.filter_fallback);
  if (config_.label_whitelist && request.attack != AttackKind::repeat) {
    auto label = parse_label(response, labels_);
    return label ? *label : std::string(kFilteredMarker);
  }
  return response;
}

}  // namespace mia
