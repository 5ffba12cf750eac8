#pragma once

#include <stdexcept>
#include <string>

namespace mia {

// File content that cannot be decoded (dataset records, config, manifests).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a domain invariant (unknown label, empty text).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unusable configuration: bad ratios, pool too small, missing env var.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prompt template missing a required placeholder.
struct TemplateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too many failed trials, or a run that cannot produce metrics.
struct ExperimentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target-model failure. Transient errors are retried by the HTTP client;
// permanent and empty-response errors surface to the attack.
struct ProviderError : std::runtime_error {
  enum class Kind { transient, permanent, empty_response };

  ProviderError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

// Attack aborted mid-sequence; carries the queries already spent.
struct AttackError : std::runtime_error {
  AttackError(const std::string& what, long long partial)
      : std::runtime_error(what), partial_queries(partial) {}
  long long partial_queries = 0;
};

}  // namespace mia
