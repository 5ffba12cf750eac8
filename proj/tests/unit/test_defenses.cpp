#include <doctest.h>

#include <fstream>

#include "mia/defenses.hpp"
#include "mia/embedding.hpp"
#include "mia/errors.hpp"
#include "mia/rng.hpp"
#include "mia/text.hpp"
#include "support/fixtures.hpp"

using namespace mia;

TEST_CASE("instruction defense appends the verbatim suffix, idempotently") {
  PromptTemplate trec = builtin_template("trec");
  BuiltPrompt prompt = render_prompt(trec, {{"What is a biosphere?", "Description"}});

  BuiltPrompt defended = apply_instruction_defense(trec, prompt);
  CHECK(defended.rendered_context.ends_with(kDefenseInstruction));
  REQUIRE(defended.defense_suffix.has_value());
  CHECK(*defended.defense_suffix == kDefenseInstruction);

  BuiltPrompt twice = apply_instruction_defense(trec, defended);
  CHECK(twice.rendered_context == defended.rendered_context);
  // suffix present exactly once
  auto first = twice.rendered_context.find(kDefenseInstruction);
  CHECK(twice.rendered_context.find(kDefenseInstruction, first + 1) == std::string::npos);
}

TEST_CASE("instruction defense applies to templates without an instruction") {
  PromptTemplate agnews = builtin_template("agnews");
  BuiltPrompt prompt = render_prompt(agnews, {{"Markets rallied on chip news", "Business"}});
  BuiltPrompt defended = apply_instruction_defense(agnews, prompt);
  CHECK(defended.rendered_context.ends_with(kDefenseInstruction));
}

TEST_CASE("shuffling paraphraser rewrites without changing length much") {
  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> words;
    std::string text;
    int n = 4 + static_cast<int>(rng.below(10));
    for (int j = 0; j < n; ++j) {
      std::string w;
      for (int k = 0; k < 3 + static_cast<int>(rng.below(5)); ++k)
        w += static_cast<char>('a' + rng.below(26));
      text += (j ? " " : "") + w;
    }
    std::string rewritten = ShufflingParaphraser::rewrite(7, text);
    CHECK(rewritten != text);
    double ratio = static_cast<double>(rewritten.size()) / static_cast<double>(text.size());
    CHECK(ratio >= 0.7);
    CHECK(ratio <= 1.3);
  }
}

TEST_CASE("paraphraser is deterministic per seed") {
  std::string text = "the quiet harbor lights were fading over amber water";
  CHECK(ShufflingParaphraser::rewrite(5, text) == ShufflingParaphraser::rewrite(5, text));
}

TEST_CASE("shuffled member completions lose trigram similarity") {
  // The rewrite must measurably perturb the repeat signal on realistic text.
  LocalTrigramEncoder enc;
  auto samples = fixtures::trec_samples(30);
  int dropped = 0;
  for (const auto& s : samples) {
    std::string rewritten = ShufflingParaphraser::rewrite(11, s.text);
    double sim = cosine_similarity(enc.encode(s.text), enc.encode(rewritten));
    CHECK(sim < 1.0);
    if (sim < 0.85) ++dropped;
  }
  CHECK(dropped >= 25);  // most fall below the repeat decision threshold
}

TEST_CASE("filter_rewrite fallback behavior") {
  struct FailingParaphraser : Provider {
    std::string generate_impl(const GenerationRequest&) override {
      throw ProviderError(ProviderError::Kind::permanent, "paraphraser down");
    }
  } failing;

  CHECK(filter_rewrite(failing, "some response", FilterFallback::pass_through) ==
        "some response");
  CHECK_THROWS_AS(filter_rewrite(failing, "some response", FilterFallback::error),
                  ProviderError);
}

TEST_CASE("filter pipeline never returns the raw completion") {
  PromptTemplate trec = builtin_template("trec");
  struct Echo : Provider {
    std::string generate_impl(const GenerationRequest&) override {
      return "alpha beta gamma delta epsilon";
    }
  } echo;
  ShufflingParaphraser paraphraser(3);
  DefenseConfig config;
  config.filter_defense = true;
  DefendedProvider defended(echo, &paraphraser, config, trec.labels);

  GenerationRequest req;
  req.context = render_prompt(trec, {{"What is a biosphere?", "Description"}});
  req.turns = {{Role::user, "What is"}};
  req.attack = AttackKind::repeat;
  CHECK(defended.generate(req) != "alpha beta gamma delta epsilon");
}

TEST_CASE("label whitelist passes labels and blocks everything else") {
  PromptTemplate trec = builtin_template("trec");
  struct Scripted : Provider {
    std::string reply;
    std::string generate_impl(const GenerationRequest&) override { return reply; }
  } scripted;
  DefenseConfig config;
  config.label_whitelist = true;
  DefendedProvider defended(scripted, nullptr, config, trec.labels);

  GenerationRequest req;
  req.context = render_prompt(trec, {{"What is a biosphere?", "Description"}});
  req.turns = {{Role::user, render_query(trec, "What is a biosphere?")}};
  req.attack = AttackKind::gap;

  scripted.reply = "The answer type is Number.";
  CHECK(defended.generate(req) == "Number");

  scripted.reply = "Yes, I remember that sentence well.";
  req.attack = AttackKind::inquiry;
  CHECK(defended.generate(req) == kFilteredMarker);
}

TEST_CASE("filter defense requires a paraphraser") {
  PromptTemplate trec = builtin_template("trec");
  struct Echo : Provider {
    std::string generate_impl(const GenerationRequest&) override { return "x"; }
  } echo;
  DefenseConfig config;
  config.filter_defense = true;
  CHECK_THROWS_AS(DefendedProvider(echo, nullptr, config, trec.labels), ConfigError);
}

TEST_CASE("synthetic demos load verbatim and validate") {
  auto dir = fixtures::temp_dir("synthetic");
  LabelSet trec_labels({"Number", "Location", "Person", "Description", "Entity",
                        "Abbreviation"});

  auto good = dir / "good.jsonl";
  {
    std::ofstream out(good);
    out << R"({"text":"Users Admin ApollosemblingIC negatives direct@GetMapping.","label":"Description"})"
        << "\n";
  }
  auto demos = load_synthetic_demos(good, trec_labels);
  REQUIRE(demos.size() == 1);
  CHECK(demos[0].text == "Users Admin ApollosemblingIC negatives direct@GetMapping.");

  auto empty = dir / "empty.jsonl";
  { std::ofstream out(empty); }
  CHECK_THROWS_AS(load_synthetic_demos(empty, trec_labels), ConfigError);

  auto bad = dir / "bad.jsonl";
  {
    std::ofstream out(bad);
    out << R"({"text":"some synthetic text","label":"Color"})" << "\n";
  }
  CHECK_THROWS_AS(load_synthetic_demos(bad, trec_labels), ValidationError);
}
