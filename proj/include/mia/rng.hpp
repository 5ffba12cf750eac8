#pragma once

// Deterministic, platform-independent randomness. Every random decision in
// the toolkit flows through an Rng seeded by an FNV-1a hash of its inputs,
// so runs are bitwise reproducible across machines and execution orders.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <type_traits>
#include <vector>

namespace mia {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffsetBasis) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::uint64_t value, std::uint64_t h = kFnvOffsetBasis) {
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<unsigned char>(value >> (8 * i));
    h *= kFnvPrime;
  }
  return h;
}

namespace detail {
inline std::uint64_t seed_fold(std::uint64_t h) { return h; }

template <typename T, typename... Rest>
std::uint64_t seed_fold(std::uint64_t h, const T& part, const Rest&... rest) {
  if constexpr (std::is_convertible_v<T, std::string_view>) {
    h = fnv1a64(std::string_view(part), h);
  } else {
    h = fnv1a64(static_cast<std::uint64_t>(part), h);
  }
  h ^= 0xff;
  h *= kFnvPrime;  // part separator, keeps ("ab","c") != ("a","bc")
  return seed_fold(h, rest...);
}
}  // namespace detail

// Folds an arbitrary mix of integers and strings into one 64-bit seed.
template <typename... Parts>
std::uint64_t derive_seed(const Parts&... parts) {
  return detail::seed_fold(kFnvOffsetBasis, parts...);
}

// Counter-based generator (splitmix64): output i = mix(seed + i*gamma).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Modulo bias is < n/2^64, irrelevant at our scales.
  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : next() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  // Geometric on {1,2,...} with success probability p, by inversion.
  int geometric(double p) {
    if (p >= 1.0) return 1;
    if (p <= 0.0) return std::numeric_limits<int>::max();
    double u = uniform();
    double k = 1.0 + std::floor(std::log1p(-u) / std::log1p(-p));
    if (k > 1e9) return 1000000000;
    return static_cast<int>(k);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace mia
