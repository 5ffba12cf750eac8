#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mia {

std::string trim(std::string_view s);

// Runs of internal whitespace become a single space.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

// Unicode NFC via ICU. Invalid UTF-8 passes through unchanged.
std::string normalize_nfc(std::string_view utf8);

// Canonical form used for dedup and membership checks:
// NFC + trim + collapse internal whitespace, case preserved.
std::string normalize_text(std::string_view s);

std::vector<std::string> split_words(std::string_view s);

// Byte offset just past the end of the n-th whitespace-delimited word,
// or npos if the text has fewer than n words.
std::size_t offset_after_word(std::string_view s, std::size_t n);

}  // namespace mia
