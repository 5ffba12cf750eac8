#include "mia/config.hpp"

#include <algorithm>
#include <charconv>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"
#include "mia/rng.hpp"

namespace mia {

using nlohmann::json;

std::size_t PositionSpec::resolve(std::size_t k) const {
  switch (mode) {
    case Mode::first: return 0;
    case Mode::last: return k - 1;
    case Mode::index:
      if (index >= k)
        throw ConfigError("target_position " + std::to_string(index) +
                          " out of range for k=" + std::to_string(k));
      return index;
  }
  return k - 1;
}

std::string PositionSpec::str() const {
  switch (mode) {
    case Mode::first: return "first";
    case Mode::last: return "last";
    case Mode::index: return std::to_string(index);
  }
  return "last";
}

PositionSpec PositionSpec::parse(const std::string& text) {
  PositionSpec spec;
  if (text == "first") {
    spec.mode = Mode::first;
  } else if (text == "last") {
    spec.mode = Mode::last;
  } else {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size())
      throw ConfigError("target_position must be \"first\", \"last\", or an index: " + text);
    spec.mode = Mode::index;
    spec.index = value;
  }
  return spec;
}

void ExperimentConfig::validate() const {
  if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
  if (k < 1) throw ConfigError("k must be at least 1");
  target_position.resolve(static_cast<std::size_t>(k));
  if (attacks.empty()) throw ConfigError("at least one attack must be configured");
  if (dataset_path.empty()) throw ConfigError("dataset.path is required");
  if (dataset_manifest.empty()) throw ConfigError("dataset.manifest is required");
  if (!(demo_fraction > 0.0 && demo_fraction < 1.0))
    throw ConfigError("demo_fraction must lie in (0,1)");
  for (double t : fpr_targets)
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("fpr_targets must lie in (0,1]");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (shadow_trials < 1) throw ConfigError("shadow_trials must be at least 1");
  provider.validate();
  if (provider.kind == ProviderConfig::Kind::simulated) simulator.validate();
  repeat.validate();
  brainwash.validate();
}

bool ExperimentConfig::wants(AttackKind kind) const {
  return std::find(attacks.begin(), attacks.end(), kind) != attacks.end();
}

std::vector<AttackKind> parse_attack_list(const std::string& csv) {
  std::vector<AttackKind> kinds;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string token = csv.substr(start, comma == std::string::npos ? csv.size() - start
                                                                     : comma - start);
    // tolerate spaces around commas
    token.erase(std::remove(token.begin(), token.end(), ' '), token.end());
    if (!token.empty()) {
      AttackKind kind = attack_kind_from(token);
      if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (kinds.empty()) throw ConfigError("empty attack list");
  return kinds;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ExperimentConfig config_from_toml(const toml::Table& t, const std::filesystem::path& base_dir) {
  ExperimentConfig c;

  c.n_trials = static_cast<int>(t.get_int("experiment.n_trials", c.n_trials));
  c.k = static_cast<int>(t.get_int("experiment.k", c.k));
  if (t.has("experiment.target_position")) {
    // accept both an integer and "first"/"last"
    if (std::holds_alternative<std::int64_t>(t.values().at("experiment.target_position"))) {
      c.target_position.mode = PositionSpec::Mode::index;
      c.target_position.index =
          static_cast<std::size_t>(t.get_int("experiment.target_position", 0));
    } else {
      c.target_position = PositionSpec::parse(t.get_string("experiment.target_position"));
    }
  }
  if (t.has("experiment.attacks")) {
    c.attacks.clear();
    for (const auto& name : t.get_string_array("experiment.attacks"))
      c.attacks.push_back(attack_kind_from(name));
  }
  c.template_id = t.get_string("experiment.template", c.template_id);
  if (t.has("experiment.template_manifest"))
    c.template_manifest = resolve(base_dir, t.get_string("experiment.template_manifest"));
  c.master_seed = static_cast<std::uint64_t>(
      t.get_int("experiment.master_seed", static_cast<std::int64_t>(c.master_seed)));
  if (t.has("experiment.fpr_targets")) c.fpr_targets = t.get_double_array("experiment.fpr_targets");
  c.parallelism = static_cast<int>(t.get_int("experiment.parallelism", c.parallelism));
  c.shadow_trials = static_cast<int>(t.get_int("experiment.shadow_trials", c.shadow_trials));

  if (t.has("dataset.path")) c.dataset_path = resolve(base_dir, t.get_string("dataset.path"));
  c.dataset_format = dataset_format_from(t.get_string("dataset.format", "jsonl"));
  if (t.has("dataset.manifest"))
    c.dataset_manifest = resolve(base_dir, t.get_string("dataset.manifest"));
  c.tsv_header = t.get_bool("dataset.tsv_header", c.tsv_header);
  c.demo_fraction = t.get_double("dataset.demo_fraction", c.demo_fraction);

  std::string kind = t.get_string("provider.kind", "simulated");
  if (kind == "simulated") {
    c.provider.kind = ProviderConfig::Kind::simulated;
  } else if (kind == "http") {
    c.provider.kind = ProviderConfig::Kind::http;
  } else {
    throw ConfigError("provider.kind must be \"http\" or \"simulated\": " + kind);
  }
  c.provider.endpoint_url = t.get_string("provider.endpoint_url", c.provider.endpoint_url);
  c.provider.model_name = t.get_string("provider.model_name", c.provider.model_name);
  c.provider.auth_token_env = t.get_string("provider.auth_token_env", c.provider.auth_token_env);
  c.provider.timeout_ms = static_cast<int>(t.get_int("provider.timeout_ms", c.provider.timeout_ms));
  c.provider.max_retries = static_cast<int>(t.get_int("provider.max_retries", c.provider.max_retries));
  c.provider.requests_per_minute =
      t.get_double("provider.requests_per_minute", c.provider.requests_per_minute);
  c.provider.inline_context = t.get_bool("provider.inline_context", c.provider.inline_context);
  c.provider.max_tokens = static_cast<int>(t.get_int("provider.max_tokens", c.provider.max_tokens));
  c.provider.temperature = t.get_double("provider.temperature", c.provider.temperature);

  auto& s = c.simulator;
  s.p_correct_member = t.get_double("simulator.p_correct_member", s.p_correct_member);
  s.p_correct_nonmember = t.get_double("simulator.p_correct_nonmember", s.p_correct_nonmember);
  s.p_yes_member = t.get_double("simulator.p_yes_member", s.p_yes_member);
  s.p_yes_nonmember = t.get_double("simulator.p_yes_nonmember", s.p_yes_nonmember);
  s.repeat_fidelity_member =
      t.get_double("simulator.repeat_fidelity_member", s.repeat_fidelity_member);
  s.repeat_fidelity_nonmember =
      t.get_double("simulator.repeat_fidelity_nonmember", s.repeat_fidelity_nonmember);
  s.mean_firmness_member = t.get_double("simulator.mean_firmness_member", s.mean_firmness_member);
  s.mean_firmness_nonmember =
      t.get_double("simulator.mean_firmness_nonmember", s.mean_firmness_nonmember);
  s.firmness_cap = static_cast<int>(t.get_int("simulator.firmness_cap", s.firmness_cap));
  s.seed = static_cast<std::uint64_t>(
      t.get_int("simulator.seed", static_cast<std::int64_t>(derive_seed(c.master_seed, "sim"))));

  c.repeat.prefix_words = static_cast<int>(t.get_int("attack.repeat.prefix_words", c.repeat.prefix_words));
  c.repeat.theta_sim = t.get_double("attack.repeat.theta_sim", c.repeat.theta_sim);
  c.repeat.allow_short_fallback =
      t.get_bool("attack.repeat.allow_short_fallback", c.repeat.allow_short_fallback);
  c.brainwash.max_iterations =
      static_cast<int>(t.get_int("attack.brainwash.max_iterations", c.brainwash.max_iterations));
  c.brainwash.wrong_label_count = static_cast<int>(
      t.get_int("attack.brainwash.wrong_label_count", c.brainwash.wrong_label_count));
  c.brainwash.theta_iter = t.get_double("attack.brainwash.theta_iter", c.brainwash.theta_iter);
  c.brainwash.fresh_session = t.get_bool("attack.brainwash.fresh_session", c.brainwash.fresh_session);
  c.hybrid.hidden_units =
      static_cast<int>(t.get_int("attack.hybrid.hidden_units", c.hybrid.hidden_units));
  c.hybrid.epochs = static_cast<int>(t.get_int("attack.hybrid.epochs", c.hybrid.epochs));
  c.hybrid.learning_rate = t.get_double("attack.hybrid.learning_rate", c.hybrid.learning_rate);
  c.hybrid.seed = static_cast<std::uint64_t>(
      t.get_int("attack.hybrid.seed", static_cast<std::int64_t>(derive_seed(c.master_seed, "hybrid"))));
  if (t.has("attack.hybrid.model_path"))
    c.hybrid_model_path = resolve(base_dir, t.get_string("attack.hybrid.model_path"));

  c.defense.instruction_defense = t.get_bool("defense.instruction", false);
  c.defense.filter_defense = t.get_bool("defense.filter", false);
  if (t.has("defense.synthetic_demos"))
    c.defense.synthetic_demos_path = resolve(base_dir, t.get_string("defense.synthetic_demos"));
  c.defense.synthetic_demos_format =
      dataset_format_from(t.get_string("defense.synthetic_demos_format", "jsonl"));
  c.defense.label_whitelist = t.get_bool("defense.label_whitelist", false);
  std::string fallback = t.get_string("defense.filter_fallback", "pass_through");
  if (fallback == "pass_through") {
    c.defense.filter_fallback = FilterFallback::pass_through;
  } else if (fallback == "error") {
    c.defense.filter_fallback = FilterFallback::error;
  } else {
    throw ConfigError("defense.filter_fallback must be \"pass_through\" or \"error\"");
  }
  c.paraphraser_seed = static_cast<std::uint64_t>(
      t.get_int("defense.paraphraser_seed", static_cast<std::int64_t>(c.paraphraser_seed)));

  std::string enc = t.get_string("embedding.kind", "local");
  if (enc == "local") {
    c.encoder.kind = EncoderConfig::Kind::local;
  } else if (enc == "http") {
    c.encoder.kind = EncoderConfig::Kind::http;
  } else {
    throw ConfigError("embedding.kind must be \"local\" or \"http\": " + enc);
  }
  c.encoder.buckets = static_cast<std::size_t>(
      t.get_int("embedding.buckets", static_cast<std::int64_t>(c.encoder.buckets)));
  c.encoder.http.endpoint_url = t.get_string("embedding.endpoint_url", "");
  c.encoder.http.model_name = t.get_string("embedding.model_name", "");
  c.encoder.http.auth_token_env =
      t.get_string("embedding.auth_token_env", c.encoder.http.auth_token_env);

  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return config_from_toml(toml::Table::parse_file(path), path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
  json attacks = json::array();
  for (AttackKind kind : c.attacks) attacks.push_back(std::string(to_string(kind)));
  json j = {
      {"experiment",
       {{"n_trials", c.n_trials},
        {"k", c.k},
        {"target_position", c.target_position.str()},
        {"attacks", attacks},
        {"template", c.template_id},
        {"master_seed", c.master_seed},
        {"fpr_targets", c.fpr_targets},
        {"parallelism", c.parallelism},
        {"shadow_trials", c.shadow_trials}}},
      {"dataset",
       {{"path", c.dataset_path.string()},
        {"format", std::string(to_string(c.dataset_format))},
        {"manifest", c.dataset_manifest.string()},
        {"tsv_header", c.tsv_header},
        {"demo_fraction", c.demo_fraction}}},
      {"provider",
       {{"kind", c.provider.kind == ProviderConfig::Kind::http ? "http" : "simulated"},
        {"model_name", c.provider.model_name},
        {"endpoint_url", c.provider.endpoint_url},
        {"inline_context", c.provider.inline_context},
        {"max_tokens", c.provider.max_tokens},
        {"temperature", c.provider.temperature}}},
      {"attack",
       {{"repeat",
         {{"prefix_words", c.repeat.prefix_words}, {"theta_sim", c.repeat.theta_sim}}},
        {"brainwash",
         {{"max_iterations", c.brainwash.max_iterations},
          {"wrong_label_count", c.brainwash.wrong_label_count},
          {"theta_iter", c.brainwash.theta_iter},
          {"fresh_session", c.brainwash.fresh_session}}},
        {"hybrid",
         {{"hidden_units", c.hybrid.hidden_units},
          {"epochs", c.hybrid.epochs},
          {"learning_rate", c.hybrid.learning_rate}}}}},
      {"defense",
       {{"instruction", c.defense.instruction_defense},
        {"filter", c.defense.filter_defense},
        {"label_whitelist", c.defense.label_whitelist},
        {"synthetic_demos",
         c.defense.synthetic_demos_path ? c.defense.synthetic_demos_path->string() : ""}}},
      {"embedding",
       {{"kind", c.encoder.kind == EncoderConfig::Kind::local ? "local" : "http"},
        {"buckets", c.encoder.buckets}}}};
  if (c.provider.kind == ProviderConfig::Kind::simulated) {
    j["simulator"] = {{"p_correct_member", c.simulator.p_correct_member},
                      {"p_correct_nonmember", c.simulator.p_correct_nonmember},
                      {"p_yes_member", c.simulator.p_yes_member},
                      {"p_yes_nonmember", c.simulator.p_yes_nonmember},
                      {"repeat_fidelity_member", c.simulator.repeat_fidelity_member},
                      {"repeat_fidelity_nonmember", c.simulator.repeat_fidelity_nonmember},
                      {"mean_firmness_member", c.simulator.mean_firmness_member},
                      {"mean_firmness_nonmember", c.simulator.mean_firmness_nonmember},
                      {"firmness_cap", c.simulator.firmness_cap},
                      {"seed", c.simulator.seed}};
  }
  return j;
}

}  // namespace mia
