#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prag {

enum class ZwnjPolicy { preserve, strip, to_space };
enum class DigitPolicy { preserve, to_ascii, to_persian };

std::string to_string(ZwnjPolicy policy);
std::string to_string(DigitPolicy policy);
ZwnjPolicy zwnj_policy_from_string(const std::string& s);
DigitPolicy digit_policy_from_string(const std::string& s);

// Source codepoint -> replacement codepoint, applied when map_arabic_compat
// is on. The default table unifies Arabic-compatibility letter forms with
// their Persian equivalents; digits are handled separately by DigitPolicy.
using CharMap = std::unordered_map<char32_t, char32_t>;

const CharMap& default_char_map();

// Two whitespace-separated columns per line, "U+XXXX U+YYYY"; '#' starts a
// comment. Throws ParseError on malformed lines.
CharMap load_char_map(const std::string& path);

struct NormalizationConfig {
    bool map_arabic_compat = true;
    ZwnjPolicy zwnj_policy = ZwnjPolicy::preserve;
    DigitPolicy digit_policy = DigitPolicy::to_ascii;
    bool strip_diacritics = true;
    bool collapse_whitespace = true;
    CharMap char_map = default_char_map();
};

// Idempotent: normalize_text(normalize_text(x, c), c) == normalize_text(x, c).
std::string normalize_text(std::string_view text, const NormalizationConfig& cfg);

struct Token {
    std::string text;
    std::size_t byte_start = 0;  // offsets into the normalized source text
    std::size_t byte_end = 0;
};

struct TokenStream {
    std::vector<Token> tokens;
};

// Maximal runs of letters/digits; punctuation and whitespace separate tokens.
// A ZWNJ (U+200C) between two word characters joins them into one token.
// Expects already-normalized text.
TokenStream tokenize(std::string_view text);

std::vector<std::string> token_texts(std::string_view text);

bool is_word_char(char32_t cp);
bool is_space_char(char32_t cp);

// Strips leading/trailing whitespace codepoints (per is_space_char).
std::string trim_whitespace(std::string_view text);

// Multiset token-overlap F1: common = sum of per-token min counts,
// precision = common/|a|, recall = common/|b|. Returns 0 when either side is
// empty or nothing overlaps.
double token_overlap_f1(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace prag
