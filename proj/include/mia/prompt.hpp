#pragma once

// ICL prompt rendering: instruction + demonstrations serialized through a
// template, and test queries in the same format.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mia/dataset.hpp"

namespace mia {

struct PromptTemplate {
  std::string id;
  std::string instruction;    // may be empty
  std::string demo_pattern;   // must contain {x} and {y}
  std::string query_pattern;  // must contain {x}, must not contain {y}
  std::string separator = "\n";
  LabelSet labels;
};

struct BuiltPrompt {
  std::string template_id;
  std::vector<LabeledSample> demonstrations;
  std::string rendered_context;
  std::optional<std::string> defense_suffix;
};

// Throws TemplateError when a placeholder rule is violated.
void validate_template(const PromptTemplate& t);

// instruction, blank line, demo blocks joined by the separator, then the
// defense suffix (when present) after one more separator.
BuiltPrompt render_prompt(const PromptTemplate& t, std::vector<LabeledSample> demos,
                          std::optional<std::string> defense_suffix = std::nullopt);

// query_pattern with {x} substituted; the answer slot stays empty.
std::string render_query(const PromptTemplate& t, std::string_view x);

// One demonstration block; also the brainwash wrong-answer assertion.
std::string render_demo_block(const PromptTemplate& t, std::string_view x, std::string_view y);

const std::vector<std::string>& builtin_template_ids();
PromptTemplate builtin_template(std::string_view id);

// JSON manifest: {"id","instruction","demo_pattern","query_pattern","separator","labels"}.
PromptTemplate load_template_manifest(const std::filesystem::path& path);

}  // namespace mia
