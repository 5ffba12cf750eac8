#pragma once

// OpenAI-compatible chat-completions client: retries with exponential
// backoff on transient failures, token-bucket rate limiting, text-only.

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "mia/provider.hpp"

namespace mia {

// Token bucket refilled at `per_minute` tokens/min; callers block until a
// token is available. Safe for concurrent use.
class RateLimiter {
 public:
  explicit RateLimiter(double per_minute);

  void acquire();

 private:
  double per_second_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);
  ~HttpProvider() override;

  // Resolves the bearer token from the configured environment variable.
  // Throws ConfigError naming the variable when it is unset.
  static std::string resolve_auth_token(const std::string& env_var);

 protected:
  std::string generate_impl(const GenerationRequest& request) override;

 private:
  std::string post_once(const std::string& body);

  ProviderConfig config_;
  std::string auth_token_;
  RateLimiter limiter_;
};

}  // namespace mia
