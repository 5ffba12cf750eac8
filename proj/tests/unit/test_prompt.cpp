#include <doctest.h>

#include <fstream>

#include "mia/errors.hpp"
#include "mia/prompt.hpp"
#include "support/fixtures.hpp"

using namespace mia;

TEST_CASE("TREC rendering is byte-exact") {
  PromptTemplate trec = builtin_template("trec");
  BuiltPrompt p = render_prompt(trec, {{"When was Ozzy Osbourne born?", "Number"}});
  CHECK(p.rendered_context ==
        "Classify the questions based on whether their answer type is a Number, Location, "
        "Person, Description, Entity, or Abbreviation.\n\n"
        "Question: When was Ozzy Osbourne born?\nAnswer Type: Number");
  CHECK(render_query(trec, "What is a biosphere?") ==
        "Question: What is a biosphere?\nAnswer Type:");
}

TEST_CASE("two demonstrations joined by the separator") {
  PromptTemplate trec = builtin_template("trec");
  BuiltPrompt p = render_prompt(trec, {{"What is a biosphere?", "Description"},
                                       {"When was Ozzy Osbourne born?", "Number"}});
  CHECK(p.rendered_context.ends_with(
      "Question: What is a biosphere?\nAnswer Type: Description\n"
      "Question: When was Ozzy Osbourne born?\nAnswer Type: Number"));
}

TEST_CASE("empty instruction starts with the demo block") {
  PromptTemplate agnews = builtin_template("agnews");
  BuiltPrompt p = render_prompt(agnews, {{"IBM Chips May Someday Heal Themselves", "Technology"}});
  CHECK(p.rendered_context ==
        "Article: IBM Chips May Someday Heal Themselves\nAnswer: Technology");
  CHECK(render_query(agnews, "IBM Chips May Someday Heal Themselves") ==
        "Article: IBM Chips May Someday Heal Themselves\nAnswer:");
}

TEST_CASE("defense suffix lands at the end") {
  PromptTemplate trec = builtin_template("trec");
  BuiltPrompt p = render_prompt(trec, {{"What is a biosphere?", "Description"}}, "SUFFIX TEXT");
  CHECK(p.rendered_context.ends_with("\nSUFFIX TEXT"));
  REQUIRE(p.defense_suffix.has_value());
  CHECK(*p.defense_suffix == "SUFFIX TEXT");
}

TEST_CASE("query preserves internal newlines verbatim") {
  PromptTemplate trec = builtin_template("trec");
  CHECK(render_query(trec, "line one\nline two") ==
        "Question: line one\nline two\nAnswer Type:");
}

TEST_CASE("placeholder validation") {
  PromptTemplate bad = builtin_template("trec");
  bad.demo_pattern = "Question: {x}\nAnswer Type:";  // no {y}
  CHECK_THROWS_AS(render_prompt(bad, {{"q", "Number"}}), TemplateError);

  PromptTemplate bad2 = builtin_template("trec");
  bad2.query_pattern = "Question: {x}\nAnswer Type: {y}";  // {y} forbidden
  CHECK_THROWS_AS(render_query(bad2, "q"), TemplateError);
}

TEST_CASE("labels outside the template set are rejected") {
  PromptTemplate trec = builtin_template("trec");
  CHECK_THROWS_AS(render_prompt(trec, {{"q", "World"}}), ValidationError);
}

TEST_CASE("every demo text appears exactly once; order matters") {
  PromptTemplate trec = builtin_template("trec");
  std::vector<LabeledSample> demos = {{"alpha question one?", "Number"},
                                      {"beta question two?", "Entity"},
                                      {"gamma question three?", "Person"}};
  BuiltPrompt p = render_prompt(trec, demos);
  for (const auto& d : demos) {
    std::size_t first = p.rendered_context.find(d.text);
    REQUIRE(first != std::string::npos);
    CHECK(p.rendered_context.find(d.text, first + 1) == std::string::npos);
  }

  std::vector<LabeledSample> swapped = {demos[1], demos[0], demos[2]};
  CHECK(render_prompt(trec, swapped).rendered_context != p.rendered_context);
}

TEST_CASE("dbpedia template carries all fourteen labels") {
  PromptTemplate db = builtin_template("dbpedia");
  CHECK(db.labels.size() == 14);
  CHECK(db.labels.contains("Transportation"));
  CHECK(render_query(db, "Leopold Bros. is a family-owned distillery.") ==
        "Article: Leopold Bros. is a family-owned distillery.\nAnswer:");
}

TEST_CASE("template manifest round-trip") {
  auto dir = fixtures::temp_dir("template");
  auto path = dir / "custom.json";
  {
    std::ofstream out(path);
    out << R"({"id":"sentiment","instruction":"Classify the sentiment.",
               "demo_pattern":"Review: {x}\nSentiment: {y}",
               "query_pattern":"Review: {x}\nSentiment:",
               "separator":"\n\n","labels":["positive","negative"]})";
  }
  PromptTemplate t = load_template_manifest(path);
  CHECK(t.id == "sentiment");
  CHECK(t.separator == "\n\n");
  BuiltPrompt p = render_prompt(t, {{"great movie", "positive"}, {"dull plot", "negative"}});
  CHECK(p.rendered_context ==
        "Classify the sentiment.\n\nReview: great movie\nSentiment: positive\n\n"
        "Review: dull plot\nSentiment: negative");

  CHECK_THROWS_AS(builtin_template("nope"), ConfigError);
}
