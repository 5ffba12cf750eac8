#include "mia/text.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <cctype>

namespace mia {

namespace {
bool is_space(unsigned char c) { return std::isspace(c) != 0; }
}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = false;
  for (unsigned char c : s) {
    if (is_space(c)) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out.push_back(' ');
    in_ws = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status)) return std::string(utf8);

  // UTF-8 -> UTF-16
  std::vector<UChar> u16(utf8.size() + 1);
  int32_t u16_len = 0;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16_len, utf8.data(),
                static_cast<int32_t>(utf8.size()), &status);
  if (U_FAILURE(status)) return std::string(utf8);

  std::vector<UChar> norm(static_cast<std::size_t>(u16_len) * 2 + 16);
  int32_t norm_len = unorm2_normalize(nfc, u16.data(), u16_len, norm.data(),
                                      static_cast<int32_t>(norm.size()), &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    status = U_ZERO_ERROR;
    norm.resize(static_cast<std::size_t>(norm_len) + 1);
    norm_len = unorm2_normalize(nfc, u16.data(), u16_len, norm.data(),
                                static_cast<int32_t>(norm.size()), &status);
  }
  if (U_FAILURE(status)) return std::string(utf8);

  std::string out(static_cast<std::size_t>(norm_len) * 4 + 4, '\0');
  int32_t out_len = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &out_len, norm.data(), norm_len,
              &status);
  if (U_FAILURE(status)) return std::string(utf8);
  out.resize(static_cast<std::size_t>(out_len));
  return out;
}

std::string normalize_text(std::string_view s) {
  return collapse_whitespace(trim(normalize_nfc(s)));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) words.emplace_back(s.substr(start, i - start));
  }
  return words;
}

std::size_t offset_after_word(std::string_view s, std::size_t n) {
  std::size_t i = 0, seen = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) break;
    while (i < s.size() && !is_space(static_cast<unsigned char>(s[i]))) ++i;
    if (++seen == n) return i;
  }
  return std::string_view::npos;
}

}  // namespace mia
