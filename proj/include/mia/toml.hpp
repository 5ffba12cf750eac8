#pragma once

// Minimal TOML subset: [tables], dotted keys, strings with the common
// escapes, integers, floats, booleans, single-line homogeneous arrays, and
// comments. Flat key-value store addressed as "section.key".

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mia::toml {

using Value = std::variant<std::string, std::int64_t, double, bool,
                           std::vector<std::string>, std::vector<double>>;

class Table {
 public:
  static Table parse(std::string_view text, std::string_view source = "<config>");
  static Table parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }

  std::string get_string(const std::string& key, std::string fallback = "") const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_string_array(const std::string& key) const;
  std::vector<double> get_double_array(const std::string& key) const;

  std::string require_string(const std::string& key) const;

  const std::map<std::string, Value>& values() const { return values_; }

 private:
  const Value* find(const std::string& key) const;
  [[noreturn]] void type_error(const std::string& key, std::string_view expected) const;

  std::map<std::string, Value> values_;
  std::string source_;
};

}  // namespace mia::toml
