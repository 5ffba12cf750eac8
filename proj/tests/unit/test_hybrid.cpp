#include <doctest.h>

#include <cmath>

#include "mia/errors.hpp"
#include "mia/hybrid.hpp"
#include "mia/rng.hpp"
#include "support/fixtures.hpp"

using namespace mia;

namespace {

std::vector<ShadowSample> separable_shadow() {
  std::vector<ShadowSample> shadow;
  for (int i = 0; i < 50; ++i) {
    shadow.push_back({{0.9, 0.9}, true});
    shadow.push_back({{0.1, 0.1}, false});
  }
  return shadow;
}

std::vector<ShadowSample> random_shadow(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<ShadowSample> shadow;
  for (std::size_t i = 0; i < n; ++i)
    shadow.push_back({{rng.uniform(), rng.uniform()}, rng.bernoulli(0.5)});
  // guarantee both classes
  shadow.push_back({{0.8, 0.8}, true});
  shadow.push_back({{0.2, 0.2}, false});
  return shadow;
}

}  // namespace

TEST_CASE("analytic gradients match central finite differences") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto shadow = random_shadow(seed, 12);
    const int hidden = 3;
    Rng rng(derive_seed(seed, "params"));
    std::vector<double> params(hidden * 2 + hidden + hidden + 1);
    for (auto& p : params) p = rng.uniform() * 2.0 - 1.0;

    std::vector<double> grad;
    hybrid_loss(params, hidden, shadow, &grad);

    const double h = 1e-6;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      double numeric =
          (hybrid_loss(plus, hidden, shadow, nullptr) - hybrid_loss(minus, hidden, shadow, nullptr)) /
          (2 * h);
      double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
      CHECK(std::abs(numeric - grad[i]) / denom < 1e-4);
    }
  }
}

TEST_CASE("separable shadow reaches training accuracy 1.0") {
  HybridTrainConfig cfg;
  auto shadow = separable_shadow();
  HybridTrainResult result = train_hybrid(shadow, cfg);
  CHECK(result.final_loss < 0.1);

  int correct = 0;
  for (const auto& s : shadow) {
    AttackOutcome out = hybrid_predict(result.model, s.features);
    if ((out.decision == Decision::member) == s.is_member) ++correct;
  }
  CHECK(correct == static_cast<int>(shadow.size()));
}

TEST_CASE("training is deterministic per seed") {
  auto shadow = random_shadow(99, 60);
  HybridTrainConfig cfg;
  cfg.epochs = 200;
  auto a = train_hybrid(shadow, cfg);
  auto b = train_hybrid(shadow, cfg);
  CHECK(pack_parameters(a.model) == pack_parameters(b.model));

  cfg.seed = 2;
  auto c = train_hybrid(shadow, cfg);
  CHECK(pack_parameters(a.model) != pack_parameters(c.model));
}

TEST_CASE("single-class shadow set refuses to train") {
  std::vector<ShadowSample> members_only(10, ShadowSample{{0.9, 0.9}, true});
  CHECK_THROWS_AS(train_hybrid(members_only, HybridTrainConfig{}), TrainingError);
}

TEST_CASE("zero model predicts probability 0.5 and the tie goes to member") {
  HybridModel zero;
  zero.layer1_weights.assign(4, 0.0);
  zero.layer1_bias.assign(2, 0.0);
  zero.layer2_weights.assign(2, 0.0);
  AttackOutcome out = hybrid_predict(zero, {0.4, 0.6});
  CHECK(out.raw_score == doctest::Approx(0.5));
  CHECK(out.decision == Decision::member);
}

TEST_CASE("trained separable model is confident on (1,1)") {
  HybridTrainResult result = train_hybrid(separable_shadow(), HybridTrainConfig{});
  CHECK(hybrid_probability(result.model, {1.0, 1.0}) > 0.9);
  CHECK(hybrid_probability(result.model, {0.0, 0.0}) < 0.1);
}

TEST_CASE("model save/load round-trip") {
  auto dir = fixtures::temp_dir("hybrid");
  HybridTrainResult result = train_hybrid(separable_shadow(), HybridTrainConfig{});
  save_hybrid_model(result.model, dir / "model.json");
  HybridModel loaded = load_hybrid_model(dir / "model.json");
  CHECK(pack_parameters(loaded) == pack_parameters(result.model));
  CHECK(loaded.feature_scale == result.model.feature_scale);
}

TEST_CASE("non-finite models are rejected at predict time") {
  HybridModel bad;
  bad.layer1_weights = {std::nan(""), 0.0};
  bad.layer1_bias = {0.0};
  bad.layer2_weights = {1.0};
  CHECK_THROWS_AS(hybrid_predict(bad, {0.5, 0.5}), ValidationError);
}
