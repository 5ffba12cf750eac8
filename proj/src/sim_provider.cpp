#include "mia/sim_provider.hpp"

#include <algorithm>
#include <array>

#include "mia/attacks.hpp"
#include "mia/defenses.hpp"
#include "mia/errors.hpp"
#include "mia/rng.hpp"
#include "mia/text.hpp"

namespace mia {

namespace {

// Filler vocabulary for completions the model does not actually remember.
constexpr std::array<std::string_view, 24> kFillerVocab = {
    "orbit",  "velvet",  "lantern", "quartz", "meadow",  "cipher", "harbor", "tundra",
    "ember",  "willow",  "falcon",  "ridge",  "cobalt",  "prairie", "summit", "geyser",
    "thicket", "mosaic", "raven",   "dune",   "bramble", "inlet",  "cinder", "fjord"};

double pow_int(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Raw byte prefix ending on a word boundary.
bool word_prefix_of(std::string_view msg, std::string_view text) {
  if (msg.empty() || msg.size() > text.size()) return false;
  if (text.substr(0, msg.size()) != msg) return false;
  return msg.size() == text.size() || is_ws(text[msg.size()]);
}

std::string pick_filler(Rng& rng, std::string_view avoid) {
  std::string_view w = kFillerVocab[rng.below(kFillerVocab.size())];
  while (w == avoid) w = kFillerVocab[rng.below(kFillerVocab.size())];
  return std::string(w);
}

}  // namespace

void SimulatedTargetParams::validate() const {
  for (double p : {p_correct_member, p_correct_nonmember, p_yes_member, p_yes_nonmember,
                   repeat_fidelity_member, repeat_fidelity_nonmember})
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("simulator probabilities must lie in [0,1]");
  if (firmness_cap < 1) throw ConfigError("firmness_cap must be at least 1");
  for (double m : {mean_firmness_member, mean_firmness_nonmember})
    if (!(m >= 1.0 && m <= static_cast<double>(firmness_cap)))
      throw ConfigError("mean_firmness must lie in [1, firmness_cap]");
}

AnswerKey::AnswerKey(const std::vector<LabeledSample>& samples) : samples_(samples) {
  for (const auto& s : samples_) by_normalized_.emplace(normalize_text(s.text), s.label);
}

std::optional<std::string> AnswerKey::label_for(std::string_view text) const {
  auto it = by_normalized_.find(normalize_text(text));
  if (it == by_normalized_.end()) return std::nullopt;
  return it->second;
}

double firmness_success_probability(double mean, int cap) {
  if (mean <= 1.0) return 1.0;
  if (mean >= static_cast<double>(cap)) return 1e-12;
  // E[min(Geom(p), cap)] = (1 - (1-p)^cap) / p is decreasing in p; bisect.
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    double value = (1.0 - pow_int(1.0 - mid, cap)) / mid;
    (value > mean ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct SimContext {
  const SimulatedTargetParams& params;
  const PromptTemplate& tmpl;
  const AnswerKey& key;
  const BuiltPrompt& prompt;
  const std::vector<ChatTurn>& turns;

  bool is_demo(std::string_view x) const {
    std::string norm = normalize_text(x);
    for (const auto& d : prompt.demonstrations)
      if (normalize_text(d.text) == norm) return true;
    return false;
  }

  std::optional<std::string> true_label(std::string_view x) const {
    std::string norm = normalize_text(x);
    for (const auto& d : prompt.demonstrations)
      if (normalize_text(d.text) == norm) return d.label;
    return key.label_for(x);
  }

  bool instruction_defended() const {
    return prompt.defense_suffix && *prompt.defense_suffix == kDefenseInstruction;
  }
};

std::string respond_inquiry(const SimContext& ctx, std::string_view x) {
  bool member = ctx.is_demo(x);
  double p_yes = member ? ctx.params.p_yes_member : ctx.params.p_yes_nonmember;
  // The defense instruction stops the model from acknowledging demonstrations.
  if (member && ctx.instruction_defended()) p_yes = ctx.params.p_yes_nonmember;
  Rng rng(derive_seed(ctx.params.seed, normalize_text(x), "inquiry"));
  return rng.bernoulli(p_yes) ? "Yes" : "No";
}

std::string respond_classification(const SimContext& ctx, std::string_view x,
                                   const std::vector<ChatTurn>& turns) {
  const auto& labels = ctx.tmpl.labels.names();

  // Brainwash regime: one or more wrong-answer assertions already sit in the
  // conversation. The asserted label is the most recent one.
  std::optional<std::string> asserted;
  int assertions = 0;
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    if (turns[i].role != Role::user) continue;
    for (const auto& label : labels) {
      if (turns[i].content == render_demo_block(ctx.tmpl, x, label)) {
        if (!asserted || *asserted != label) {
          asserted = label;
          assertions = 1;
        } else {
          ++assertions;
        }
      }
    }
  }

  bool member = ctx.is_demo(x);
  std::optional<std::string> truth = ctx.true_label(x);

  if (asserted) {
    double mean = member ? ctx.params.mean_firmness_member : ctx.params.mean_firmness_nonmember;
    double p = firmness_success_probability(mean, ctx.params.firmness_cap);
    Rng rng(derive_seed(ctx.params.seed, normalize_text(x), "brainwash", *asserted));
    int firmness = std::min(rng.geometric(p), ctx.params.firmness_cap);
    if (assertions >= firmness) return *asserted;
    if (truth) return *truth;
    return labels[Rng(derive_seed(ctx.params.seed, normalize_text(x), "fallback-label"))
                      .below(labels.size())];
  }

  Rng rng(derive_seed(ctx.params.seed, normalize_text(x), "classify"));
  if (truth && rng.bernoulli(member ? ctx.params.p_correct_member
                                    : ctx.params.p_correct_nonmember))
    return *truth;

  // A uniformly wrong label (uniform over all labels when the truth is unknown).
  std::vector<std::string_view> wrong;
  for (const auto& label : labels)
    if (!truth || label != *truth) wrong.push_back(label);
  if (wrong.empty()) return labels.front();
  return std::string(wrong[rng.below(wrong.size())]);
}

std::string blend_suffix(const SimContext& ctx, Rng& rng, std::string_view suffix) {
  // Keeps most of the remembered text but garbles every 6th word: high but
  // sub-identical similarity, mirroring how a model riffs on in-context text.
  auto words = split_words(suffix);
  if (words.empty()) return " " + pick_filler(rng, "");
  bool replaced = false;
  for (std::size_t j = 0; j < words.size(); ++j) {
    if ((j + 1) % 6 == 0) {
      words[j] = pick_filler(rng, words[j]);
      replaced = true;
    }
  }
  if (!replaced) words.back() = pick_filler(rng, words.back());
  std::string out;
  for (const auto& w : words) {
    out += ' ';
    out += w;
  }
  return out;
}

std::string babble_suffix(Rng& rng, std::string_view suffix) {
  auto words = split_words(suffix);
  std::size_t n = std::max<std::size_t>(words.size(), 1);
  std::string out;
  for (std::size_t j = 0; j < n; ++j) {
    out += ' ';
    out += pick_filler(rng, "");
  }
  return out;
}

std::optional<std::string> respond_completion(const SimContext& ctx, std::string_view msg) {
  // Prompt demonstrations first, then the wider answer key, in stable order.
  const LabeledSample* match = nullptr;
  bool member = false;
  for (const auto& d : ctx.prompt.demonstrations) {
    if (word_prefix_of(msg, d.text)) {
      match = &d;
      member = true;
      break;
    }
  }
  if (!match) {
    for (const auto& s : ctx.key.samples()) {
      if (word_prefix_of(msg, s.text)) {
        match = &s;
        break;
      }
    }
  }
  if (!match) return std::nullopt;

  std::string_view suffix = std::string_view(match->text).substr(msg.size());
  double fidelity =
      member ? ctx.params.repeat_fidelity_member : ctx.params.repeat_fidelity_nonmember;
  Rng rng(derive_seed(ctx.params.seed, normalize_text(match->text), "completion"));
  if (rng.bernoulli(fidelity)) return std::string(suffix);
  if (member) return blend_suffix(ctx, rng, suffix);
  return babble_suffix(rng, suffix);
}

}  // namespace

std::string simulate_response(const SimulatedTargetParams& params, const PromptTemplate& tmpl,
                              const AnswerKey& key, const BuiltPrompt& prompt,
                              const std::vector<ChatTurn>& turns) {
  if (turns.empty() || turns.back().role != Role::user)
    throw ValidationError("simulate_response: conversation must end with a user turn");
  SimContext ctx{params, tmpl, key, prompt, turns};
  const std::string& msg = turns.back().content;

  if (msg.size() > kInquiryPrefix.size() && msg.starts_with(kInquiryPrefix) &&
      msg.back() == '?') {
    std::string_view x(msg);
    x.remove_prefix(kInquiryPrefix.size());
    x.remove_suffix(1);
    return respond_inquiry(ctx, x);
  }

  // Classification query: match the template's query pattern around {x}.
  std::size_t slot = tmpl.query_pattern.find("{x}");
  if (slot != std::string::npos) {
    std::string_view before(tmpl.query_pattern.data(), slot);
    std::string_view after(tmpl.query_pattern.data() + slot + 3,
                           tmpl.query_pattern.size() - slot - 3);
    if (msg.size() > before.size() + after.size() && msg.starts_with(before) &&
        msg.ends_with(after)) {
      std::string_view x(msg);
      x.remove_prefix(before.size());
      x.remove_suffix(after.size());
      return respond_classification(ctx, x, turns);
    }
  }

  if (auto completion = respond_completion(ctx, msg)) return *completion;

  // Unrecognized queries fall through to classification handling.
  return respond_classification(ctx, msg, turns);
}

SimulatedProvider::SimulatedProvider(SimulatedTargetParams params, PromptTemplate tmpl,
                                     AnswerKey key)
    : params_(params), template_(std::move(tmpl)), key_(std::move(key)) {
  params_.validate();
  validate_template(template_);
}

std::string SimulatedProvider::generate_impl(const GenerationRequest& request) {
  return simulate_response(params_, template_, key_, request.context, request.turns);
}

}  // namespace mia
