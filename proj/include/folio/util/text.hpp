// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace folio::util {

// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD,
// one replacement per offending byte, so slicing stays well-defined.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(const std::u32string& code_points);
std::string encode_utf8(char32_t code_point);

// Code-point count of a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// UTF-8 substring by code-point offsets [start, end).
std::string utf8_slice(std::string_view text, std::size_t start, std::size_t end);

// Lowercasing over ASCII and Latin-1; other code points pass through.
char32_t to_lower(char32_t cp);
std::string casefold(std::string_view text);

bool is_whitespace(char32_t cp);
bool is_digit(char32_t cp);

// Lowercase letters over ASCII and Latin-1.
bool is_lowercase_letter(char32_t cp);
bool is_uppercase_letter(char32_t cp);

// Punctuation per the Unicode P* categories over ASCII, Latin-1 and the
// General Punctuation block.
bool is_punctuation(char32_t cp);

// Maximal runs of non-whitespace code points.
std::vector<std::string> split_tokens(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);

bool starts_with(std::string_view text, std::string_view prefix);
bool ends_with(std::string_view text, std::string_view suffix);

std::string strip_trailing_whitespace(std::string_view line);
std::string trim(std::string_view text);

}  // namespace folio::util
