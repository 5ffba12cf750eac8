#pragma once

// Text encoders and the similarity function behind the Repeat attack.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mia {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual EmbeddingVector encode(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
};

// Validates the input, then delegates to the encoder.
EmbeddingVector embed(Encoder& encoder, std::string_view text);

// u.v / (|u||v|). Throws MetricError on dimension mismatch or a zero vector.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Hashed character-trigram counts (stable 64-bit FNV-1a mod bucket count),
// L2-normalized. Deterministic, offline, and monotone in trigram overlap,
// which is all the Repeat attack needs from a similarity signal.
class LocalTrigramEncoder : public Encoder {
 public:
  explicit LocalTrigramEncoder(std::size_t buckets = 4096) : buckets_(buckets) {}

  EmbeddingVector encode(std::string_view text) override;
  std::size_t dimension() const override { return buckets_; }

 private:
  std::size_t buckets_;
};

struct HttpEncoderConfig {
  std::string endpoint_url;
  std::string model_name;
  std::string auth_token_env = "AUDIT_API_KEY";
  int timeout_ms = 30000;
  int max_retries = 3;
};

// OpenAI-compatible: POST {endpoint}/embeddings {"model","input"},
// reads data[0].embedding.
class HttpEncoder : public Encoder {
 public:
  explicit HttpEncoder(HttpEncoderConfig config);
  ~HttpEncoder() override;

  EmbeddingVector encode(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  HttpEncoderConfig config_;
  std::size_t dimension_ = 0;  // learned from the first response
};

}  // namespace mia
