#include <doctest.h>

#include <fstream>

#include "mia/config.hpp"
#include "mia/errors.hpp"
#include "mia/toml.hpp"
#include "support/fixtures.hpp"

using namespace mia;

TEST_CASE("toml parses sections, scalars, and arrays") {
  auto table = toml::Table::parse(R"(
# top comment
title = "demo run"

[experiment]
n_trials = 500
demo_fraction = 0.5
force = true
attacks = ["gap", "repeat"]
fprs = [0.01, 0.05, 0.1]   # trailing comment

[attack.repeat]
theta_sim = 0.85
)");
  CHECK(table.get_string("title") == "demo run");
  CHECK(table.get_int("experiment.n_trials", 0) == 500);
  CHECK(table.get_double("experiment.demo_fraction", 0) == doctest::Approx(0.5));
  CHECK(table.get_bool("experiment.force", false));
  CHECK(table.get_string_array("experiment.attacks") ==
        std::vector<std::string>{"gap", "repeat"});
  CHECK(table.get_double_array("experiment.fprs") == std::vector<double>{0.01, 0.05, 0.1});
  CHECK(table.get_double("attack.repeat.theta_sim", 0) == doctest::Approx(0.85));
  CHECK(table.get_int("missing.key", 42) == 42);
}

TEST_CASE("toml string escapes") {
  auto table = toml::Table::parse(R"(s = "a\nb\t\"c\"")");
  CHECK(table.get_string("s") == "a\nb\t\"c\"");
}

TEST_CASE("toml integer arrays read back as doubles") {
  auto table = toml::Table::parse("xs = [1, 2, 3]");
  CHECK(table.get_double_array("xs") == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("toml errors carry line numbers") {
  auto expect_line = [](const std::string& text, const std::string& needle) {
    try {
      toml::Table::parse(text, "test.toml");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_line("a = 1\nb = \n", "test.toml:2");
  expect_line("a = [1, 2\n", "test.toml:1");
  expect_line("a = \"unterminated\n", "test.toml:1");
  expect_line("a = 1\na = 2\n", "duplicate");
  expect_line("a = [1, \"x\"]\n", "homogeneous");
  expect_line("a = 1 trailing\n", "trailing");
}

TEST_CASE("toml type mismatches surface as ConfigError") {
  auto table = toml::Table::parse("a = \"text\"");
  CHECK_THROWS_AS(table.get_int("a", 0), ConfigError);
  CHECK_THROWS_AS(table.get_double_array("a"), ConfigError);
}

namespace {

std::filesystem::path write_config(const std::string& body) {
  auto dir = fixtures::temp_dir("config");
  fixtures::write_trec_fixture(dir, 24);
  auto path = dir / "experiment.toml";
  std::ofstream out(path);
  out << "[dataset]\npath = \"data.jsonl\"\nmanifest = \"labels.json\"\n" << body;
  return path;
}

}  // namespace

TEST_CASE("experiment config defaults and overrides") {
  auto path = write_config(R"(
[experiment]
n_trials = 12
k = 2
target_position = "first"
attacks = ["gap", "brainwash"]
master_seed = 99
)");
  ExperimentConfig config = load_experiment_config(path);
  CHECK(config.n_trials == 12);
  CHECK(config.k == 2);
  CHECK(config.target_position.resolve(2) == 0);
  CHECK(config.attacks == std::vector<AttackKind>{AttackKind::gap, AttackKind::brainwash});
  CHECK(config.master_seed == 99);
  // defaults
  CHECK(config.repeat.theta_sim == doctest::Approx(0.85));
  CHECK(config.brainwash.theta_iter == doctest::Approx(3.5));
  CHECK(config.provider.kind == ProviderConfig::Kind::simulated);
  CHECK(config.demo_fraction == doctest::Approx(0.5));
  // dataset paths resolve relative to the config file
  CHECK(config.dataset_path.is_absolute());
}

TEST_CASE("integer target_position is accepted") {
  auto path = write_config("[experiment]\nk = 4\ntarget_position = 2\n");
  ExperimentConfig config = load_experiment_config(path);
  CHECK(config.target_position.resolve(4) == 2);
}

TEST_CASE("config validation failures") {
  CHECK_THROWS_AS(load_experiment_config(write_config("[experiment]\nk = 0\n")), ConfigError);
  CHECK_THROWS_AS(
      load_experiment_config(write_config("[experiment]\nk = 2\ntarget_position = 5\n")),
      ConfigError);
  CHECK_THROWS_AS(load_experiment_config(write_config("[dataset]\ndemo_fraction = 1.5\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_experiment_config(write_config("[experiment]\nattacks = [\"nope\"]\n")),
                  ConfigError);
  CHECK_THROWS_AS(
      load_experiment_config(write_config("[provider]\nkind = \"http\"\n")),  // missing url/model
      ConfigError);
}

TEST_CASE("attack list parsing") {
  auto kinds = parse_attack_list("repeat, brainwash,hybrid");
  CHECK(kinds == std::vector<AttackKind>{AttackKind::repeat, AttackKind::brainwash,
                                         AttackKind::hybrid});
  CHECK_THROWS_AS(parse_attack_list("repeat,bogus"), ConfigError);
  CHECK_THROWS_AS(parse_attack_list(""), ConfigError);
}
