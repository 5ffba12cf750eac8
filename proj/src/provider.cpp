#include "mia/provider.hpp"

#include "mia/errors.hpp"

namespace mia {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::gap: return "gap";
    case AttackKind::inquiry: return "inquiry";
    case AttackKind::repeat: return "repeat";
    case AttackKind::brainwash: return "brainwash";
    case AttackKind::hybrid: return "hybrid";
    case AttackKind::other: return "other";
  }
  return "other";
}

AttackKind attack_kind_from(std::string_view name) {
  for (AttackKind kind : kAllAttacks)
    if (to_string(kind) == name) return kind;
  if (name == "other") return AttackKind::other;
  throw ConfigError("unknown attack kind: " + std::string(name));
}

LedgerSnapshot QueryLedger::snapshot() const {
  LedgerSnapshot snap;
  snap.total = total_.load(std::memory_order_relaxed);
  for (AttackKind kind : kAllAttacks) {
    long long n = per_attack_[index_of(kind)].load(std::memory_order_relaxed);
    if (n > 0) snap.per_attack[kind] = n;
  }
  return snap;
}

void ProviderConfig::validate() const {
  if (kind == Kind::http && (endpoint_url.empty() || model_name.empty()))
    throw ConfigError("http provider requires endpoint_url and model_name");
  if (max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (requests_per_minute <= 0.0) throw ConfigError("requests_per_minute must be positive");
}

std::string Provider::generate(const GenerationRequest& request) {
  if (request.max_tokens < 1) throw ValidationError("generate: max_tokens must be at least 1");
  if (request.turns.empty()) throw ValidationError("generate: no turns");
  for (const auto& turn : request.turns)
    if (turn.content.empty()) throw ValidationError("generate: empty turn content");
  ledger_.record(request.attack);
  return generate_impl(request);
}

}  // namespace mia
