#pragma once

// The four text-only membership attacks. Each maps one target sample to an
// AttackOutcome using nothing but generated text.

#include <optional>
#include <string>
#include <string_view>

#include "mia/attack_kind.hpp"
#include "mia/embedding.hpp"
#include "mia/prompt.hpp"
#include "mia/provider.hpp"

namespace mia {

enum class Decision { member, nonmember, abstain };

std::string_view to_string(Decision d);

struct AttackOutcome {
  AttackKind attack = AttackKind::other;
  // gap/inquiry: 0/1; repeat: similarity in [-1,1]; brainwash: mean
  // iterations >= 1; hybrid: membership probability.
  double raw_score = 0.0;
  Decision decision = Decision::abstain;
  long long queries_used = 0;
  int iteration_cap = 0;        // brainwash: the cap the score was recorded under
  bool prefix_fallback = false;  // repeat: prefix was shortened for a short sample
};

struct RepeatConfig {
  int prefix_words = 3;
  double theta_sim = 0.85;
  bool allow_short_fallback = true;  // short samples fall back to len-1 words

  void validate() const;
};

struct BrainwashConfig {
  int max_iterations = 10;
  int wrong_label_count = 3;  // clamped to |labels|-1 at attack time
  double theta_iter = 3.5;
  bool fresh_session = false;  // re-send accumulated assertions in a fresh conversation

  void validate() const;
};

inline constexpr std::string_view kInquiryPrefix = "Have you seen this sentence before: ";

std::string inquiry_query(std::string_view x);

// Earliest affirmation/negation token wins (word-boundary matches only).
enum class YesNo { yes, no, unknown };
YesNo parse_yes_no(std::string_view text);

// Label whose name occurs earliest in the output (case/whitespace
// normalized, word-boundary matches); position ties go to the longer name.
std::optional<std::string> parse_label(std::string_view text, const LabelSet& labels);

// Classify-and-check: correct prediction => member.
AttackOutcome gap_attack(Provider& provider, const PromptTemplate& tmpl,
                         const BuiltPrompt& prompt, std::string_view x, std::string_view y);

// Ask the model directly whether it has seen the sentence.
AttackOutcome inquiry_attack(Provider& provider, const BuiltPrompt& prompt, std::string_view x);

// Feed a word prefix, score the completion's similarity to the original.
AttackOutcome repeat_attack(Provider& provider, Encoder& encoder, const BuiltPrompt& prompt,
                            std::string_view x, const RepeatConfig& cfg);

// Assert wrong labels until the model yields; the iteration count, averaged
// over several wrong labels, proxies the model's confidence.
AttackOutcome brainwash_attack(Provider& provider, const PromptTemplate& tmpl,
                               const BuiltPrompt& prompt, std::string_view x, std::string_view y,
                               const BrainwashConfig& cfg);

// (similarity, mean iterations normalized by the cap) for the hybrid model.
std::array<double, 2> extract_features(const AttackOutcome& repeat_outcome,
                                       const AttackOutcome& brainwash_outcome);

}  // namespace mia
