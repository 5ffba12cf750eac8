#pragma once

// Deterministic simulated target with plantable memorization. Behavior keys
// on whether the queried text is one of the prompt's demonstrations, using
// the structural query markers emitted by the attacks module. Responses are
// a pure function of (params, prompt, turns): every random decision comes
// from a stream seeded by hash(params.seed, target text, query kind).

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mia/dataset.hpp"
#include "mia/prompt.hpp"
#include "mia/provider.hpp"

namespace mia {

struct SimulatedTargetParams {
  double p_correct_member = 1.0;
  double p_correct_nonmember = 0.5;
  double p_yes_member = 0.9;
  double p_yes_nonmember = 0.1;
  double repeat_fidelity_member = 0.9;
  double repeat_fidelity_nonmember = 0.1;
  double mean_firmness_member = 6.0;    // expected brainwash iterations
  double mean_firmness_nonmember = 1.5;
  int firmness_cap = 10;  // firmness draws are truncated here
  std::uint64_t seed = 0;

  void validate() const;
};

// Ground-truth lookup for targets that are not in the prompt. The simulator
// is a desk-scale oracle; handing it the dataset's answer key is what lets
// "answers correctly with probability p" mean exactly that for nonmembers.
class AnswerKey {
 public:
  AnswerKey() = default;
  explicit AnswerKey(const std::vector<LabeledSample>& samples);

  std::optional<std::string> label_for(std::string_view text) const;
  const std::vector<LabeledSample>& samples() const { return samples_; }

 private:
  std::vector<LabeledSample> samples_;
  std::unordered_map<std::string, std::string> by_normalized_;
};

// Success probability p such that E[min(Geom(p), cap)] equals the requested
// mean, so the configured firmness is the expected observed iteration count.
double firmness_success_probability(double mean, int cap);

std::string simulate_response(const SimulatedTargetParams& params, const PromptTemplate& tmpl,
                              const AnswerKey& key, const BuiltPrompt& prompt,
                              const std::vector<ChatTurn>& turns);

class SimulatedProvider : public Provider {
 public:
  SimulatedProvider(SimulatedTargetParams params, PromptTemplate tmpl, AnswerKey key);

  const SimulatedTargetParams& params() const { return params_; }

 protected:
  std::string generate_impl(const GenerationRequest& request) override;

 private:
  SimulatedTargetParams params_;
  PromptTemplate template_;
  AnswerKey key_;
};

}  // namespace mia
