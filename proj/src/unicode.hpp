#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace echodetect::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;
inline constexpr char32_t kFullwidthAt = 0xFF20;

// Decodes UTF-8 into codepoints. Malformed sequences become U+FFFD,
// one replacement per offending byte, so decoding never fails.
std::vector<char32_t> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

// Word and whitespace classes modelled on the common regex semantics
// for Unicode text: word characters are letters, digits and the
// underscore. Coverage outside the major scripts is approximate; the
// full astral plane (emoji in particular) is intentionally excluded.
bool is_word_char(char32_t cp);
bool is_space_char(char32_t cp);

// Simple case folding: full mappings for ASCII, Latin-1, Latin
// Extended-A, Greek, Cyrillic and fullwidth Latin; everything else is
// left untouched.
char32_t to_lower(char32_t cp);
std::string lower_utf8(std::string_view text);

}  // namespace echodetect::unicode
