#include "mia/attacks.hpp"

#include <algorithm>
#include <cctype>

#include "mia/errors.hpp"
#include "mia/text.hpp"

namespace mia {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::member: return "member";
    case Decision::nonmember: return "nonmember";
    case Decision::abstain: return "abstain";
  }
  return "abstain";
}

void RepeatConfig::validate() const {
  if (prefix_words < 1) throw ConfigError("prefix_words must be at least 1");
  if (!(theta_sim >= -1.0 && theta_sim <= 1.0))
    throw ConfigError("theta_sim must lie in [-1,1]");
}

void BrainwashConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (wrong_label_count < 1) throw ConfigError("wrong_label_count must be at least 1");
}

std::string inquiry_query(std::string_view x) {
  std::string q(kInquiryPrefix);
  q += x;
  q += '?';
  return q;
}

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Earliest word-boundary occurrence of `token` in `haystack` (both already
// lowercased); npos when absent. Boundary checks keep "not" from matching
// inside "cannot" and "no" inside "know".
std::size_t find_token(std::string_view haystack, std::string_view token) {
  std::size_t pos = 0;
  while ((pos = haystack.find(token, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || !word_char(haystack[pos - 1]) || !word_char(token.front());
    std::size_t end = pos + token.size();
    bool right_ok = end == haystack.size() || !word_char(haystack[end]) || !word_char(token.back());
    if (left_ok && right_ok) return pos;
    ++pos;
  }
  return std::string_view::npos;
}

}  // namespace

YesNo parse_yes_no(std::string_view text) {
  static constexpr std::string_view kYes[] = {"yes", "yeah", "i have seen"};
  static constexpr std::string_view kNo[] = {"no", "not", "haven't", "have not"};
  std::string lower = to_lower_ascii(text);
  std::size_t best_yes = std::string_view::npos, best_no = std::string_view::npos;
  for (auto token : kYes) best_yes = std::min(best_yes, find_token(lower, token));
  for (auto token : kNo) best_no = std::min(best_no, find_token(lower, token));
  if (best_yes == std::string_view::npos && best_no == std::string_view::npos)
    return YesNo::unknown;
  return best_yes <= best_no ? YesNo::yes : YesNo::no;
}

std::optional<std::string> parse_label(std::string_view text, const LabelSet& labels) {
  std::string haystack = to_lower_ascii(collapse_whitespace(text));
  std::size_t best_pos = std::string_view::npos;
  std::size_t best_len = 0;
  const std::string* best = nullptr;
  for (const auto& label : labels.names()) {
    std::string needle = to_lower_ascii(collapse_whitespace(label));
    std::size_t pos = find_token(haystack, needle);
    if (pos == std::string_view::npos) continue;
    // Ties at the same position go to the longer label name.
    if (pos < best_pos || (pos == best_pos && needle.size() > best_len)) {
      best_pos = pos;
      best_len = needle.size();
      best = &label;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

AttackOutcome gap_attack(Provider& provider, const PromptTemplate& tmpl,
                         const BuiltPrompt& prompt, std::string_view x, std::string_view y) {
  if (!tmpl.labels.contains(y))
    throw ValidationError("gap_attack: label \"" + std::string(y) + "\" not in the label set");

  GenerationRequest request;
  request.context = prompt;
  request.turns = {{Role::user, render_query(tmpl, x)}};
  request.attack = AttackKind::gap;
  std::string response = provider.generate(request);

  AttackOutcome outcome;
  outcome.attack = AttackKind::gap;
  outcome.queries_used = 1;
  auto parsed = parse_label(response, tmpl.labels);
  if (!parsed) {
    outcome.decision = Decision::abstain;
    outcome.raw_score = 0.0;
    return outcome;
  }
  bool correct = *parsed == y;
  outcome.raw_score = correct ? 1.0 : 0.0;
  outcome.decision = correct ? Decision::member : Decision::nonmember;
  return outcome;
}

AttackOutcome inquiry_attack(Provider& provider, const BuiltPrompt& prompt, std::string_view x) {
  if (x.empty()) throw ValidationError("inquiry_attack: empty target");

  GenerationRequest request;
  request.context = prompt;
  request.turns = {{Role::user, inquiry_query(x)}};
  request.attack = AttackKind::inquiry;
  std::string response = provider.generate(request);

  AttackOutcome outcome;
  outcome.attack = AttackKind::inquiry;
  outcome.queries_used = 1;
  switch (parse_yes_no(response)) {
    case YesNo::yes:
      outcome.raw_score = 1.0;
      outcome.decision = Decision::member;
      break;
    case YesNo::no:
      outcome.raw_score = 0.0;
      outcome.decision = Decision::nonmember;
      break;
    case YesNo::unknown:
      outcome.raw_score = 0.0;
      outcome.decision = Decision::abstain;
      break;
  }
  return outcome;
}

AttackOutcome repeat_attack(Provider& provider, Encoder& encoder, const BuiltPrompt& prompt,
                            std::string_view x, const RepeatConfig& cfg) {
  cfg.validate();
  auto words = split_words(x);
  if (words.empty()) throw ValidationError("repeat_attack: empty target");

  int prefix_words = cfg.prefix_words;
  bool fell_back = false;
  if (words.size() <= static_cast<std::size_t>(prefix_words)) {
    if (!cfg.allow_short_fallback || words.size() < 2)
      throw ValidationError("repeat_attack: sample shorter than the prefix (" +
                            std::to_string(words.size()) + " words)");
    prefix_words = static_cast<int>(words.size()) - 1;
    fell_back = true;
  }

  // Raw byte slice so that prefix + true completion reassembles x exactly.
  std::size_t cut = offset_after_word(x, static_cast<std::size_t>(prefix_words));
  std::string prefix(x.substr(0, cut));

  GenerationRequest request;
  request.context = prompt;
  request.turns = {{Role::user, prefix}};
  request.attack = AttackKind::repeat;
  std::string completion = provider.generate(request);

  std::string regenerated = prefix + completion;
  double similarity =
      cosine_similarity(embed(encoder, x), embed(encoder, regenerated));

  AttackOutcome outcome;
  outcome.attack = AttackKind::repeat;
  outcome.queries_used = 1;
  outcome.raw_score = similarity;
  outcome.prefix_fallback = fell_back;
  outcome.decision = similarity >= cfg.theta_sim ? Decision::member : Decision::nonmember;
  return outcome;
}

AttackOutcome brainwash_attack(Provider& provider, const PromptTemplate& tmpl,
                               const BuiltPrompt& prompt, std::string_view x, std::string_view y,
                               const BrainwashConfig& cfg) {
  cfg.validate();
  if (tmpl.labels.size() < 2) throw ValidationError("brainwash_attack: need at least 2 labels");
  if (!tmpl.labels.contains(y))
    throw ValidationError("brainwash_attack: label \"" + std::string(y) +
                          "\" not in the label set");

  // Wrong labels in label-set order, skipping the truth.
  std::vector<std::string> wrong_labels;
  for (const auto& label : tmpl.labels.names()) {
    if (label != y) wrong_labels.push_back(label);
    if (wrong_labels.size() >= static_cast<std::size_t>(cfg.wrong_label_count)) break;
  }

  const std::string query = render_query(tmpl, x);
  long long queries = 0;
  double total_iterations = 0.0;

  for (const auto& wrong : wrong_labels) {
    const std::string assertion = render_demo_block(tmpl, x, wrong);
    std::vector<ChatTurn> turns;
    int iterations = cfg.max_iterations;  // cap-hit counts as the cap
    for (int i = 1; i <= cfg.max_iterations; ++i) {
      if (cfg.fresh_session) {
        // Fresh conversation carrying i copies of the assertion.
        turns.clear();
        for (int r = 0; r < i; ++r) turns.push_back({Role::user, assertion});
      } else {
        turns.push_back({Role::user, assertion});
      }
      GenerationRequest request;
      request.context = prompt;
      request.turns = turns;
      request.turns.push_back({Role::user, query});
      request.attack = AttackKind::brainwash;

      std::string response;
      try {
        response = provider.generate(request);
      } catch (const ProviderError& e) {
        throw AttackError(std::string("brainwash aborted: ") + e.what(), queries);
      }
      ++queries;

      auto parsed = parse_label(response, tmpl.labels);
      if (!cfg.fresh_session) {
        turns.push_back({Role::user, query});
        turns.push_back({Role::assistant, response});
      }
      if (parsed && *parsed == wrong) {
        iterations = i;
        break;
      }
    }
    total_iterations += iterations;
  }

  AttackOutcome outcome;
  outcome.attack = AttackKind::brainwash;
  outcome.queries_used = queries;
  outcome.iteration_cap = cfg.max_iterations;
  outcome.raw_score = total_iterations / static_cast<double>(wrong_labels.size());
  outcome.decision = outcome.raw_score >= cfg.theta_iter ? Decision::member : Decision::nonmember;
  return outcome;
}

std::array<double, 2> extract_features(const AttackOutcome& repeat_outcome,
                                       const AttackOutcome& brainwash_outcome) {
  if (repeat_outcome.attack != AttackKind::repeat ||
      brainwash_outcome.attack != AttackKind::brainwash)
    throw ValidationError("extract_features: expects (repeat, brainwash) outcomes");
  if (brainwash_outcome.iteration_cap < 1)
    throw ValidationError("extract_features: brainwash outcome lacks its iteration cap");
  return {repeat_outcome.raw_score,
          brainwash_outcome.raw_score / static_cast<double>(brainwash_outcome.iteration_cap)};
}

}  // namespace mia
