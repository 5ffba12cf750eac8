#include <doctest.h>

#include <cmath>
#include <set>

#include "mia/rng.hpp"

using namespace mia;

TEST_CASE("fnv1a64 matches the reference constants") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 12638187200555641996ull);
  CHECK(fnv1a64("foobar") == 9625390261332436968ull);
}

TEST_CASE("derive_seed separates parts") {
  CHECK(derive_seed("ab", "c") != derive_seed("a", "bc"));
  CHECK(derive_seed(1, "x") != derive_seed("x", 1));
  CHECK(derive_seed(42, "trial", 7) == derive_seed(42, "trial", 7));
}

TEST_CASE("Rng is deterministic and uniform-ish") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng r(99);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below stays in range and covers values") {
  Rng r(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(r.below(7));
  CHECK(*seen.rbegin() <= 6);
  CHECK(seen.size() == 7);
}

TEST_CASE("geometric with p=1 is the point mass at 1") {
  Rng r(11);
  for (int i = 0; i < 50; ++i) CHECK(r.geometric(1.0) == 1);
}

TEST_CASE("geometric mean approximates 1/p") {
  Rng r(17);
  double sum = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += r.geometric(1.0 / 6.0);
  CHECK(sum / n == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("shuffle is deterministic per seed and a permutation") {
  std::vector<int> v1 = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> v2 = v1;
  Rng a(3), b(3);
  a.shuffle(v1);
  b.shuffle(v2);
  CHECK(v1 == v2);
  std::multiset<int> sorted(v1.begin(), v1.end());
  CHECK(sorted == std::multiset<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
