#include "mia/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mia/errors.hpp"

namespace mia::toml {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::string_view source;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + message);
  }
};

void skip_inline_ws(Cursor& c) {
  while (c.pos < c.text.size() && (c.text[c.pos] == ' ' || c.text[c.pos] == '\t')) ++c.pos;
}

bool bare_key_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_' || ch == '-';
}

std::string parse_key(Cursor& c) {
  std::string key;
  while (c.pos < c.text.size() && (bare_key_char(c.text[c.pos]) || c.text[c.pos] == '.'))
    key.push_back(c.text[c.pos++]);
  if (key.empty()) c.fail("expected a key");
  return key;
}

std::string parse_basic_string(Cursor& c) {
  ++c.pos;  // opening quote
  std::string value;
  while (true) {
    if (c.pos >= c.text.size() || c.text[c.pos] == '\n') c.fail("unterminated string");
    char ch = c.text[c.pos++];
    if (ch == '"') return value;
    if (ch != '\\') {
      value.push_back(ch);
      continue;
    }
    if (c.pos >= c.text.size()) c.fail("dangling escape");
    char esc = c.text[c.pos++];
    switch (esc) {
      case '"': value.push_back('"'); break;
      case '\\': value.push_back('\\'); break;
      case 'n': value.push_back('\n'); break;
      case 't': value.push_back('\t'); break;
      case 'r': value.push_back('\r'); break;
      default: c.fail(std::string("unsupported escape \\") + esc);
    }
  }
}

std::string_view scan_scalar_token(Cursor& c) {
  std::size_t start = c.pos;
  while (c.pos < c.text.size()) {
    char ch = c.text[c.pos];
    if (ch == ',' || ch == ']' || ch == '#' || ch == '\n' || ch == ' ' || ch == '\t') break;
    ++c.pos;
  }
  return c.text.substr(start, c.pos - start);
}

Value parse_scalar(Cursor& c) {
  if (c.text[c.pos] == '"') return parse_basic_string(c);
  std::string_view token = scan_scalar_token(c);
  if (token.empty()) c.fail("expected a value");
  if (token == "true") return true;
  if (token == "false") return false;

  std::int64_t as_int = 0;
  auto [int_end, int_ec] = std::from_chars(token.data(), token.data() + token.size(), as_int);
  if (int_ec == std::errc() && int_end == token.data() + token.size()) return as_int;

  std::string buf(token);
  char* end = nullptr;
  double as_double = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() + buf.size()) return as_double;
  c.fail("cannot parse value: " + buf);
}

Value parse_array(Cursor& c) {
  ++c.pos;  // '['
  std::vector<std::string> strings;
  std::vector<double> numbers;
  bool any_string = false, any_number = false;
  while (true) {
    skip_inline_ws(c);
    if (c.pos >= c.text.size() || c.text[c.pos] == '\n') c.fail("unterminated array");
    if (c.text[c.pos] == ']') {
      ++c.pos;
      break;
    }
    Value element = parse_scalar(c);
    if (std::holds_alternative<std::string>(element)) {
      any_string = true;
      strings.push_back(std::get<std::string>(element));
    } else if (std::holds_alternative<std::int64_t>(element)) {
      any_number = true;
      numbers.push_back(static_cast<double>(std::get<std::int64_t>(element)));
    } else if (std::holds_alternative<double>(element)) {
      any_number = true;
      numbers.push_back(std::get<double>(element));
    } else {
      c.fail("unsupported array element type");
    }
    skip_inline_ws(c);
    if (c.pos < c.text.size() && c.text[c.pos] == ',') {
      ++c.pos;
      continue;
    }
  }
  if (any_string && any_number) c.fail("arrays must be homogeneous");
  if (any_string) return strings;
  return numbers;
}

}  // namespace

Table Table::parse(std::string_view text, std::string_view source) {
  Table table;
  table.source_ = std::string(source);
  Cursor c{text, 0, 1, source};
  std::string prefix;

  while (c.pos < c.text.size()) {
    skip_inline_ws(c);
    if (c.pos >= c.text.size()) break;
    char ch = c.text[c.pos];
    if (ch == '\n') {
      ++c.pos;
      ++c.line;
      continue;
    }
    if (ch == '#') {
      while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
      continue;
    }
    if (ch == '[') {
      ++c.pos;
      skip_inline_ws(c);
      prefix = parse_key(c);
      skip_inline_ws(c);
      if (c.pos >= c.text.size() || c.text[c.pos] != ']') c.fail("expected ']'");
      ++c.pos;
      continue;
    }

    std::string key = parse_key(c);
    skip_inline_ws(c);
    if (c.pos >= c.text.size() || c.text[c.pos] != '=') c.fail("expected '=' after key " + key);
    ++c.pos;
    skip_inline_ws(c);
    if (c.pos >= c.text.size() || c.text[c.pos] == '\n') c.fail("missing value for key " + key);

    Value value = c.text[c.pos] == '[' ? parse_array(c) : parse_scalar(c);
    std::string full_key = prefix.empty() ? key : prefix + "." + key;
    if (table.values_.contains(full_key)) c.fail("duplicate key " + full_key);
    table.values_.emplace(std::move(full_key), std::move(value));

    skip_inline_ws(c);
    if (c.pos < c.text.size() && c.text[c.pos] == '#')
      while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
    if (c.pos < c.text.size() && c.text[c.pos] != '\n') c.fail("trailing characters after value");
  }
  return table;
}

Table Table::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const Value* Table::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Table::type_error(const std::string& key, std::string_view expected) const {
  throw ConfigError(source_ + ": key \"" + key + "\" is not a " + std::string(expected));
}

std::string Table::get_string(const std::string& key, std::string fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* s = std::get_if<std::string>(v)) return *s;
  type_error(key, "string");
}

std::int64_t Table::get_int(const std::string& key, std::int64_t fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* i = std::get_if<std::int64_t>(v)) return *i;
  type_error(key, "integer");
}

double Table::get_double(const std::string& key, double fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* d = std::get_if<double>(v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  type_error(key, "number");
}

bool Table::get_bool(const std::string& key, bool fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (auto* b = std::get_if<bool>(v)) return *b;
  type_error(key, "boolean");
}

std::vector<std::string> Table::get_string_array(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return {};
  if (auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  type_error(key, "string array");
}

std::vector<double> Table::get_double_array(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return {};
  if (auto* a = std::get_if<std::vector<double>>(v)) return *a;
  type_error(key, "number array");
}

std::string Table::require_string(const std::string& key) const {
  if (!has(key)) throw ConfigError(source_ + ": missing required key \"" + key + "\"");
  return get_string(key);
}

}  // namespace mia::toml
