#pragma once

// Black-box access to the target model M. Providers return generated text
// only; no probabilities, logits, or losses cross this boundary.

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mia/attack_kind.hpp"
#include "mia/prompt.hpp"

namespace mia {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);

struct ChatTurn {
  Role role;
  std::string content;
};

struct GenerationRequest {
  BuiltPrompt context;
  std::vector<ChatTurn> turns;
  int max_tokens = 64;
  double temperature = 0.0;
  AttackKind attack = AttackKind::other;  // ledger + defense routing tag
};

struct LedgerSnapshot {
  long long total = 0;
  std::map<AttackKind, long long> per_attack;
};

// Monotone atomic counters; safe under concurrent generate calls.
class QueryLedger {
 public:
  void record(AttackKind kind) {
    total_.fetch_add(1, std::memory_order_relaxed);
    per_attack_[index_of(kind)].fetch_add(1, std::memory_order_relaxed);
  }

  LedgerSnapshot snapshot() const;

 private:
  static std::size_t index_of(AttackKind kind) { return static_cast<std::size_t>(kind); }

  std::atomic<long long> total_{0};
  std::array<std::atomic<long long>, 6> per_attack_{};
};

struct ProviderConfig {
  enum class Kind { http, simulated } kind = Kind::simulated;
  std::string endpoint_url;
  std::string model_name;
  std::string auth_token_env = "AUDIT_API_KEY";
  int timeout_ms = 30000;
  int max_retries = 3;
  double requests_per_minute = 60.0;
  bool inline_context = false;  // deliver the prompt as inline user text instead of a system message
  int max_tokens = 64;
  double temperature = 0.0;

  void validate() const;
};

class Provider {
 public:
  virtual ~Provider() = default;

  // Validates the request, records it in the ledger, and produces text.
  std::string generate(const GenerationRequest& request);

  const QueryLedger& ledger() const { return ledger_; }

 protected:
  virtual std::string generate_impl(const GenerationRequest& request) = 0;

 private:
  QueryLedger ledger_;
};

}  // namespace mia
