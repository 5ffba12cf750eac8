#pragma once

// Hybrid attack model: 2 -> H rectified units -> sigmoid, trained from
// scratch with full-batch gradient descent on logistic loss. Small enough
// that a shadow set of ~100 targets suffices.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mia/attacks.hpp"

namespace mia {

struct HybridModel {
  std::vector<double> layer1_weights;  // H x 2, row-major
  std::vector<double> layer1_bias;     // H
  std::vector<double> layer2_weights;  // H
  double layer2_bias = 0.0;
  std::array<double, 2> feature_scale = {1.0, 1.0};

  std::size_t hidden_units() const { return layer1_bias.size(); }
};

struct ShadowSample {
  std::array<double, 2> features;  // (similarity, normalized iterations)
  bool is_member = false;
};

struct HybridTrainConfig {
  int hidden_units = 8;
  int epochs = 2000;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
};

struct HybridTrainResult {
  HybridModel model;
  double final_loss = 0.0;
};

// Flat parameter order: W1 (H*2), b1 (H), w2 (H), b2. Used by training and
// by the finite-difference gradient tests.
std::vector<double> pack_parameters(const HybridModel& model);
HybridModel unpack_parameters(const std::vector<double>& params, int hidden_units);

// Mean logistic loss over the batch; grad (same layout) is optional.
double hybrid_loss(const std::vector<double>& params, int hidden_units,
                   const std::vector<ShadowSample>& batch, std::vector<double>* grad);

HybridTrainResult train_hybrid(const std::vector<ShadowSample>& shadow,
                               const HybridTrainConfig& config);

double hybrid_probability(const HybridModel& model, std::array<double, 2> features);

// decision member iff probability >= 0.5.
AttackOutcome hybrid_predict(const HybridModel& model, std::array<double, 2> features);

void save_hybrid_model(const HybridModel& model, const std::filesystem::path& path);
HybridModel load_hybrid_model(const std::filesystem::path& path);

}  // namespace mia
