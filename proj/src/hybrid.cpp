#include "mia/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"
#include "mia/rng.hpp"

namespace mia {

using nlohmann::json;

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

constexpr double kProbFloor = 1e-12;

}  // namespace

std::vector<double> pack_parameters(const HybridModel& model) {
  std::vector<double> params;
  params.reserve(model.layer1_weights.size() + model.layer1_bias.size() +
                 model.layer2_weights.size() + 1);
  params.insert(params.end(), model.layer1_weights.begin(), model.layer1_weights.end());
  params.insert(params.end(), model.layer1_bias.begin(), model.layer1_bias.end());
  params.insert(params.end(), model.layer2_weights.begin(), model.layer2_weights.end());
  params.push_back(model.layer2_bias);
  return params;
}

HybridModel unpack_parameters(const std::vector<double>& params, int hidden_units) {
  auto h = static_cast<std::size_t>(hidden_units);
  if (params.size() != h * 2 + h + h + 1)
    throw ValidationError("hybrid parameter vector has the wrong size");
  HybridModel model;
  model.layer1_weights.assign(params.begin(), params.begin() + h * 2);
  model.layer1_bias.assign(params.begin() + h * 2, params.begin() + h * 3);
  model.layer2_weights.assign(params.begin() + h * 3, params.begin() + h * 4);
  model.layer2_bias = params.back();
  return model;
}

double hybrid_loss(const std::vector<double>& params, int hidden_units,
                   const std::vector<ShadowSample>& batch, std::vector<double>* grad) {
  auto h = static_cast<std::size_t>(hidden_units);
  const double* w1 = params.data();          // h x 2
  const double* b1 = params.data() + h * 2;  // h
  const double* w2 = params.data() + h * 3;  // h
  double b2 = params.back();

  if (grad) grad->assign(params.size(), 0.0);
  double* g_w1 = grad ? grad->data() : nullptr;
  double* g_b1 = grad ? grad->data() + h * 2 : nullptr;
  double* g_w2 = grad ? grad->data() + h * 3 : nullptr;

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> hidden(h);
  for (const auto& sample : batch) {
    double z_out = b2;
    for (std::size_t j = 0; j < h; ++j) {
      double z = w1[j * 2] * sample.features[0] + w1[j * 2 + 1] * sample.features[1] + b1[j];
      hidden[j] = z > 0.0 ? z : 0.0;
      z_out += w2[j] * hidden[j];
    }
    double p = sigmoid(z_out);
    double y = sample.is_member ? 1.0 : 0.0;
    double pc = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
    loss -= (y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc)) * inv_n;

    if (grad) {
      double dz_out = (p - y) * inv_n;
      (*grad)[params.size() - 1] += dz_out;
      for (std::size_t j = 0; j < h; ++j) {
        g_w2[j] += dz_out * hidden[j];
        if (hidden[j] > 0.0) {
          double dz = dz_out * w2[j];
          g_w1[j * 2] += dz * sample.features[0];
          g_w1[j * 2 + 1] += dz * sample.features[1];
          g_b1[j] += dz;
        }
      }
    }
  }
  return loss;
}

HybridTrainResult train_hybrid(const std::vector<ShadowSample>& shadow,
                               const HybridTrainConfig& config) {
  if (config.hidden_units < 1) throw ConfigError("hidden_units must be at least 1");
  if (config.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (config.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  bool has_member = false, has_nonmember = false;
  for (const auto& s : shadow) (s.is_member ? has_member : has_nonmember) = true;
  if (!has_member || !has_nonmember)
    throw TrainingError("shadow set must contain both members and nonmembers");

  auto h = static_cast<std::size_t>(config.hidden_units);
  Rng rng(derive_seed(config.seed, "hybrid-init"));
  std::vector<double> params(h * 2 + h + h + 1);
  for (std::size_t i = 0; i < h * 2; ++i) params[i] = rng.uniform() * 2.0 - 1.0;
  for (std::size_t i = h * 2; i < h * 3; ++i) params[i] = 0.01;  // keep units initially live
  for (std::size_t i = h * 3; i < h * 4; ++i) params[i] = rng.uniform() * 2.0 - 1.0;
  params.back() = 0.0;

  std::vector<double> grad;
  double loss = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    loss = hybrid_loss(params, config.hidden_units, shadow, &grad);
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= config.learning_rate * grad[i];
  }
  loss = hybrid_loss(params, config.hidden_units, shadow, nullptr);

  HybridTrainResult result;
  result.model = unpack_parameters(params, config.hidden_units);
  result.final_loss = loss;
  return result;
}

double hybrid_probability(const HybridModel& model, std::array<double, 2> features) {
  double f0 = features[0] * model.feature_scale[0];
  double f1 = features[1] * model.feature_scale[1];
  double z_out = model.layer2_bias;
  for (std::size_t j = 0; j < model.hidden_units(); ++j) {
    double z = model.layer1_weights[j * 2] * f0 + model.layer1_weights[j * 2 + 1] * f1 +
               model.layer1_bias[j];
    if (z > 0.0) z_out += model.layer2_weights[j] * z;
  }
  return sigmoid(z_out);
}

AttackOutcome hybrid_predict(const HybridModel& model, std::array<double, 2> features) {
  for (double p : pack_parameters(model))
    if (!std::isfinite(p)) throw ValidationError("hybrid model has non-finite parameters");
  AttackOutcome outcome;
  outcome.attack = AttackKind::hybrid;
  outcome.raw_score = hybrid_probability(model, features);
  outcome.decision = outcome.raw_score >= 0.5 ? Decision::member : Decision::nonmember;
  outcome.queries_used = 0;  // consumes features from attacks already run
  return outcome;
}

void save_hybrid_model(const HybridModel& model, const std::filesystem::path& path) {
  json j = {{"hidden_units", model.hidden_units()},
            {"layer1_weights", model.layer1_weights},
            {"layer1_bias", model.layer1_bias},
            {"layer2_weights", model.layer2_weights},
            {"layer2_bias", model.layer2_bias},
            {"feature_scale", model.feature_scale}};
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write hybrid model: " + path.string());
  out << j.dump(2) << '\n';
}

HybridModel load_hybrid_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open hybrid model: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  HybridModel model;
  try {
    model.layer1_weights = j.at("layer1_weights").get<std::vector<double>>();
    model.layer1_bias = j.at("layer1_bias").get<std::vector<double>>();
    model.layer2_weights = j.at("layer2_weights").get<std::vector<double>>();
    model.layer2_bias = j.at("layer2_bias").get<double>();
    auto scale = j.at("feature_scale").get<std::vector<double>>();
    if (scale.size() != 2) throw ParseError(path.string() + ": feature_scale needs 2 entries");
    model.feature_scale = {scale[0], scale[1]};
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  auto h = model.layer1_bias.size();
  if (h == 0 || model.layer1_weights.size() != h * 2 || model.layer2_weights.size() != h)
    throw ParseError(path.string() + ": inconsistent layer shapes");
  return model;
}

}  // namespace mia
