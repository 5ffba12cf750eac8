#include "mia/http_provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mia/embedding.hpp"
#include "mia/errors.hpp"

namespace mia {

using nlohmann::json;

namespace {

// "http://host:port/path" -> {"http://host:port", "/path"}
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string base = url.substr(0, path_start);
  std::string path = url.substr(path_start);
  if (path == "/") path.clear();
  return {base, path};
}

bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

// Shared retry loop: `send` returns the response body or throws ProviderError.
template <typename Send>
std::string with_retries(int max_retries, Send&& send) {
  int attempt = 0;
  while (true) {
    try {
      return send();
    } catch (const ProviderError& e) {
      if (e.kind != ProviderError::Kind::transient || attempt >= max_retries) throw;
      auto backoff = std::chrono::milliseconds(100) * (1 << std::min(attempt, 6));
      std::this_thread::sleep_for(backoff);
      ++attempt;
    }
  }
}

std::string http_post_json(const std::string& url, const std::string& path_suffix,
                           const std::string& token, int timeout_ms, const std::string& body) {
  auto [base, path] = split_url(url);
  httplib::Client client(base);
  client.set_connection_timeout(0, timeout_ms * 1000);
  client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  auto res = client.Post(path + path_suffix, headers, body, "application/json");
  if (!res)
    throw ProviderError(ProviderError::Kind::transient,
                        "network error: " + httplib::to_string(res.error()));
  if (res->status >= 400) {
    auto kind = transient_status(res->status) ? ProviderError::Kind::transient
                                              : ProviderError::Kind::permanent;
    throw ProviderError(kind, "HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return res->body;
}

}  // namespace

RateLimiter::RateLimiter(double per_minute)
    : per_second_(per_minute / 60.0), tokens_(1.0), last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  while (true) {
    auto now = std::chrono::steady_clock::now();
    tokens_ = std::min(1.0 + per_second_,  // small burst headroom
                       tokens_ + std::chrono::duration<double>(now - last_).count() * per_second_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    double wait_s = (1.0 - tokens_) / per_second_;
    lock.unlock();
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
    lock.lock();
  }
}

std::string HttpProvider::resolve_auth_token(const std::string& env_var) {
  const char* token = std::getenv(env_var.c_str());
  if (token == nullptr || *token == '\0')
    throw ConfigError("auth token environment variable " + env_var + " is not set");
  return token;
}

HttpProvider::HttpProvider(ProviderConfig config)
    : config_(std::move(config)), limiter_(config_.requests_per_minute) {
  config_.validate();
  auth_token_ = resolve_auth_token(config_.auth_token_env);
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::post_once(const std::string& body) {
  limiter_.acquire();
  return http_post_json(config_.endpoint_url, "/chat/completions", auth_token_,
                        config_.timeout_ms, body);
}

std::string HttpProvider::generate_impl(const GenerationRequest& request) {
  json messages = json::array();
  if (config_.inline_context) {
    // Prepend the rendered context to the first user turn.
    bool injected = false;
    for (const auto& turn : request.turns) {
      std::string content = turn.content;
      if (!injected && turn.role == Role::user) {
        content = request.context.rendered_context + "\n" + content;
        injected = true;
      }
      messages.push_back({{"role", to_string(turn.role)}, {"content", content}});
    }
  } else {
    messages.push_back({{"role", "system"}, {"content", request.context.rendered_context}});
    for (const auto& turn : request.turns)
      messages.push_back({{"role", to_string(turn.role)}, {"content", turn.content}});
  }

  json body = {{"model", config_.model_name},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};

  std::string response =
      with_retries(config_.max_retries, [&] { return post_once(body.dump()); });

  json j;
  try {
    j = json::parse(response);
  } catch (const json::exception& e) {
    throw ProviderError(ProviderError::Kind::permanent,
                        std::string("malformed completion response: ") + e.what());
  }
  if (!j.contains("choices") || j.at("choices").empty())
    throw ProviderError(ProviderError::Kind::permanent, "completion response has no choices");
  std::string text = j.at("choices").at(0).at("message").value("content", std::string());
  if (text.empty())
    throw ProviderError(ProviderError::Kind::empty_response, "empty completion");
  return text;
}

HttpEncoder::HttpEncoder(HttpEncoderConfig config) : config_(std::move(config)) {
  if (config_.endpoint_url.empty() || config_.model_name.empty())
    throw ConfigError("http encoder requires endpoint_url and model_name");
}

HttpEncoder::~HttpEncoder() = default;

EmbeddingVector HttpEncoder::encode(std::string_view text) {
  json body = {{"model", config_.model_name}, {"input", std::string(text)}};
  std::string token = HttpProvider::resolve_auth_token(config_.auth_token_env);
  std::string response = with_retries(config_.max_retries, [&] {
    return http_post_json(config_.endpoint_url, "/embeddings", token, config_.timeout_ms,
                          body.dump());
  });

  json j;
  try {
    j = json::parse(response);
  } catch (const json::exception& e) {
    throw ProviderError(ProviderError::Kind::permanent,
                        std::string("malformed embeddings response: ") + e.what());
  }
  EmbeddingVector vec;
  try {
    for (const auto& v : j.at("data").at(0).at("embedding")) vec.values.push_back(v.get<double>());
  } catch (const json::exception& e) {
    throw ProviderError(ProviderError::Kind::permanent,
                        std::string("embeddings response missing data[0].embedding: ") + e.what());
  }
  if (vec.values.empty())
    throw ProviderError(ProviderError::Kind::empty_response, "empty embedding");
  if (dimension_ == 0) dimension_ = vec.values.size();
  if (vec.values.size() != dimension_)
    throw ProviderError(ProviderError::Kind::permanent, "embedding dimension changed mid-run");
  return vec;
}

}  // namespace mia
