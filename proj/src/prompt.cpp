#include "mia/prompt.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mia/errors.hpp"

namespace mia {

using nlohmann::json;

namespace {

std::string substitute(std::string_view pattern, std::string_view placeholder,
                       std::string_view value) {
  std::string out;
  out.reserve(pattern.size() + value.size());
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = pattern.find(placeholder, pos);
    if (hit == std::string_view::npos) {
      out.append(pattern.substr(pos));
      return out;
    }
    out.append(pattern.substr(pos, hit - pos));
    out.append(value);
    pos = hit + placeholder.size();
  }
}

}  // namespace

void validate_template(const PromptTemplate& t) {
  if (t.demo_pattern.find("{x}") == std::string::npos ||
      t.demo_pattern.find("{y}") == std::string::npos)
    throw TemplateError("template \"" + t.id + "\": demo_pattern needs both {x} and {y}");
  if (t.query_pattern.find("{x}") == std::string::npos)
    throw TemplateError("template \"" + t.id + "\": query_pattern needs {x}");
  if (t.query_pattern.find("{y}") != std::string::npos)
    throw TemplateError("template \"" + t.id + "\": query_pattern must not contain {y}");
}

BuiltPrompt render_prompt(const PromptTemplate& t, std::vector<LabeledSample> demos,
                          std::optional<std::string> defense_suffix) {
  validate_template(t);
  if (demos.empty()) throw ValidationError("render_prompt: no demonstrations");
  for (const auto& d : demos)
    if (!t.labels.contains(d.label))
      throw ValidationError("demonstration label \"" + d.label + "\" not in template \"" +
                            t.id + "\" label set");

  std::string ctx;
  if (!t.instruction.empty()) {
    ctx += t.instruction;
    ctx += "\n\n";
  }
  for (std::size_t i = 0; i < demos.size(); ++i) {
    if (i > 0) ctx += t.separator;
    ctx += render_demo_block(t, demos[i].text, demos[i].label);
  }
  if (defense_suffix) {
    ctx += t.separator;
    ctx += *defense_suffix;
  }

  BuiltPrompt prompt;
  prompt.template_id = t.id;
  prompt.demonstrations = std::move(demos);
  prompt.rendered_context = std::move(ctx);
  prompt.defense_suffix = std::move(defense_suffix);
  return prompt;
}

std::string render_query(const PromptTemplate& t, std::string_view x) {
  validate_template(t);
  if (x.empty()) throw ValidationError("render_query: empty input");
  return substitute(t.query_pattern, "{x}", x);
}

std::string render_demo_block(const PromptTemplate& t, std::string_view x, std::string_view y) {
  return substitute(substitute(t.demo_pattern, "{x}", x), "{y}", y);
}

namespace {

PromptTemplate make_trec() {
  PromptTemplate t;
  t.id = "trec";
  t.instruction =
      "Classify the questions based on whether their answer type is a Number, Location, "
      "Person, Description, Entity, or Abbreviation.";
  t.demo_pattern = "Question: {x}\nAnswer Type: {y}";
  t.query_pattern = "Question: {x}\nAnswer Type:";
  t.labels = LabelSet({"Number", "Location", "Person", "Description", "Entity", "Abbreviation"});
  return t;
}

PromptTemplate make_agnews() {
  PromptTemplate t;
  t.id = "agnews";
  t.instruction = "";
  t.demo_pattern = "Article: {x}\nAnswer: {y}";
  t.query_pattern = "Article: {x}\nAnswer:";
  t.labels = LabelSet({"World", "Sports", "Business", "Technology"});
  return t;
}

PromptTemplate make_dbpedia() {
  PromptTemplate t;
  t.id = "dbpedia";
  t.instruction =
      "Classify the documents based on whether they are about a Company, School, Artist, "
      "Athlete, Politician, Transportation, Building, Nature, Village, Animal, Plant, Album, "
      "Film, or Book.";
  t.demo_pattern = "Article: {x}\nAnswer: {y}";
  t.query_pattern = "Article: {x}\nAnswer:";
  t.labels = LabelSet({"Company", "School", "Artist", "Athlete", "Politician", "Transportation",
                       "Building", "Nature", "Village", "Animal", "Plant", "Album", "Film",
                       "Book"});
  return t;
}

}  // namespace

const std::vector<std::string>& builtin_template_ids() {
  static const std::vector<std::string> ids = {"trec", "agnews", "dbpedia"};
  return ids;
}

PromptTemplate builtin_template(std::string_view id) {
  if (id == "trec") return make_trec();
  if (id == "agnews") return make_agnews();
  if (id == "dbpedia") return make_dbpedia();
  throw ConfigError("unknown built-in template: " + std::string(id));
}

PromptTemplate load_template_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open template manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  PromptTemplate t;
  try {
    t.id = j.at("id").get<std::string>();
    t.instruction = j.value("instruction", std::string());
    t.demo_pattern = j.at("demo_pattern").get<std::string>();
    t.query_pattern = j.at("query_pattern").get<std::string>();
    t.separator = j.value("separator", std::string("\n"));
    std::vector<std::string> labels;
    for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
    t.labels = LabelSet(std::move(labels));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  validate_template(t);
  return t;
}

}  // namespace mia
