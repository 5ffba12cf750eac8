#include "mia/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "mia/errors.hpp"
#include "mia/rng.hpp"

namespace mia {

EmbeddingVector embed(Encoder& encoder, std::string_view text) {
  if (text.empty()) throw ValidationError("embed: empty text");
  return encoder.encode(text);
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension() || u.dimension() == 0)
    throw MetricError("cosine_similarity: dimension mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    dot += u.values[i] * v.values[i];
    nu += u.values[i] * u.values[i];
    nv += v.values[i] * v.values[i];
  }
  if (nu == 0.0 || nv == 0.0)
    throw MetricError("cosine_similarity: undefined for a zero vector");
  double sim = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(sim, -1.0, 1.0);
}

EmbeddingVector LocalTrigramEncoder::encode(std::string_view text) {
  EmbeddingVector vec;
  vec.values.assign(buckets_, 0.0);
  if (text.size() < 3) {
    vec.values[fnv1a64(text) % buckets_] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i)
      vec.values[fnv1a64(text.substr(i, 3)) % buckets_] += 1.0;
  }
  double norm = 0.0;
  for (double x : vec.values) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : vec.values) x /= norm;
  return vec;
}

}  // namespace mia
