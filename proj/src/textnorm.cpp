#include "prag/textnorm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "prag/errors.hpp"
#include "prag/utf8.hpp"

namespace prag {

std::string to_string(ZwnjPolicy policy) {
    switch (policy) {
        case ZwnjPolicy::preserve: return "preserve";
        case ZwnjPolicy::strip: return "strip";
        case ZwnjPolicy::to_space: return "to_space";
    }
    return "preserve";
}

std::string to_string(DigitPolicy policy) {
    switch (policy) {
        case DigitPolicy::preserve: return "preserve";
        case DigitPolicy::to_ascii: return "to_ascii";
        case DigitPolicy::to_persian: return "to_persian";
    }
    return "preserve";
}

ZwnjPolicy zwnj_policy_from_string(const std::string& s) {
    if (s == "preserve") return ZwnjPolicy::preserve;
    if (s == "strip") return ZwnjPolicy::strip;
    if (s == "to_space") return ZwnjPolicy::to_space;
    throw Error("unknown zwnj policy: " + s);
}

DigitPolicy digit_policy_from_string(const std::string& s) {
    if (s == "preserve") return DigitPolicy::preserve;
    if (s == "to_ascii") return DigitPolicy::to_ascii;
    if (s == "to_persian") return DigitPolicy::to_persian;
    throw Error("unknown digit policy: " + s);
}

namespace {

constexpr char32_t kZwnj = 0x200C;

bool is_arabic_diacritic(char32_t cp) {
    return cp >= 0x064B && cp <= 0x065F;  // harakat block
}

bool is_arabic_indic_digit(char32_t cp) {
    return cp >= 0x0660 && cp <= 0x0669;
}

bool is_extended_arabic_indic_digit(char32_t cp) {
    return cp >= 0x06F0 && cp <= 0x06F9;
}

char32_t convert_digit(char32_t cp, DigitPolicy policy) {
    switch (policy) {
        case DigitPolicy::preserve:
            return cp;
        case DigitPolicy::to_ascii:
            if (is_arabic_indic_digit(cp)) return U'0' + (cp - 0x0660);
            if (is_extended_arabic_indic_digit(cp)) return U'0' + (cp - 0x06F0);
            return cp;
        case DigitPolicy::to_persian:
            if (cp >= U'0' && cp <= U'9') return 0x06F0 + (cp - U'0');
            if (is_arabic_indic_digit(cp)) return 0x06F0 + (cp - 0x0660);
            return cp;
    }
    return cp;
}

char32_t parse_codepoint(const std::string& field, std::size_t line_no) {
    if (field.size() < 3 || (field[0] != 'U' && field[0] != 'u') || field[1] != '+')
        throw ParseError(line_no, "expected 'U+XXXX', got '" + field + "'");
    char32_t cp = 0;
    for (std::size_t i = 2; i < field.size(); ++i) {
        const char c = field[i];
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = 10 + (c - 'a');
        else if (c >= 'A' && c <= 'F')
            digit = 10 + (c - 'A');
        else
            throw ParseError(line_no, "bad hex digit in '" + field + "'");
        cp = cp * 16 + static_cast<char32_t>(digit);
    }
    if (cp > 0x10FFFF) throw ParseError(line_no, "codepoint out of range: " + field);
    return cp;
}

}  // namespace

const CharMap& default_char_map() {
    static const CharMap map = {
        {0x064A, 0x06CC},  // Arabic yeh -> Farsi yeh
        {0x0649, 0x06CC},  // alef maksura -> Farsi yeh
        {0x0643, 0x06A9},  // Arabic kaf -> keheh
    };
    return map;
}

CharMap load_char_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open character map file: " + path);
    CharMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string src, dst, extra;
        if (!(fields >> src)) continue;  // blank line
        if (!(fields >> dst)) throw ParseError(line_no, "expected two columns");
        if (fields >> extra) throw ParseError(line_no, "trailing content: '" + extra + "'");
        map[parse_codepoint(src, line_no)] = parse_codepoint(dst, line_no);
    }
    return map;
}

std::string normalize_text(std::string_view text, const NormalizationConfig& cfg) {
    std::string mapped;
    mapped.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto [cp, len] = utf8::decode(text, i);
        i += len;
        if (cfg.map_arabic_compat) {
            auto it = cfg.char_map.find(cp);
            if (it != cfg.char_map.end()) cp = it->second;
        }
        cp = convert_digit(cp, cfg.digit_policy);
        if (cfg.strip_diacritics && is_arabic_diacritic(cp)) continue;
        if (cp == kZwnj) {
            if (cfg.zwnj_policy == ZwnjPolicy::strip) continue;
            if (cfg.zwnj_policy == ZwnjPolicy::to_space) cp = U' ';
        }
        utf8::append(mapped, cp);
    }
    if (!cfg.collapse_whitespace) return mapped;

    std::string out;
    out.reserve(mapped.size());
    bool pending_space = false;
    bool seen_char = false;
    for (std::size_t i = 0; i < mapped.size();) {
        auto [cp, len] = utf8::decode(mapped, i);
        i += len;
        if (is_space_char(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && seen_char) out.push_back(' ');
        pending_space = false;
        seen_char = true;
        utf8::append(out, cp);
    }
    return out;
}

bool is_space_char(char32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_word_char(char32_t cp) {
    if ((cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z'))
        return true;
    if (cp < 0x80) return false;
    // Latin-1 and Latin Extended letters
    if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
    // Greek, Cyrillic
    if (cp >= 0x0386 && cp <= 0x04FF) return cp != 0x0387;
    // Hebrew
    if (cp >= 0x05D0 && cp <= 0x05EA) return true;
    // Arabic letters (the Persian alphabet lives in these ranges)
    if (cp >= 0x0620 && cp <= 0x064A) return true;
    if (cp >= 0x066E && cp <= 0x066F) return true;
    if (cp >= 0x0671 && cp <= 0x06D3) return true;
    if (cp == 0x06D5) return true;
    if (cp >= 0x06E5 && cp <= 0x06E6) return true;
    if (cp >= 0x06EE && cp <= 0x06EF) return true;
    if (cp >= 0x06FA && cp <= 0x06FF) return true;
    if (cp >= 0x0750 && cp <= 0x077F) return true;  // Arabic supplement
    // Arabic-Indic digits
    if (cp >= 0x0660 && cp <= 0x0669) return true;
    if (cp >= 0x06F0 && cp <= 0x06F9) return true;
    // Arabic presentation forms
    if (cp >= 0xFB50 && cp <= 0xFDC7) return true;
    if (cp >= 0xFDF0 && cp <= 0xFDFB) return true;
    if (cp >= 0xFE70 && cp <= 0xFEFC) return true;
    // CJK, kana
    if (cp >= 0x3040 && cp <= 0x30FF) return cp != 0x30FB;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
    return false;
}

TokenStream tokenize(std::string_view text) {
    TokenStream stream;
    std::size_t i = 0;
    while (i < text.size()) {
        auto [cp, len] = utf8::decode(text, i);
        if (!is_word_char(cp)) {
            i += len;
            continue;
        }
        const std::size_t start = i;
        std::size_t end = i;
        while (i < text.size()) {
            auto [c, l] = utf8::decode(text, i);
            if (is_word_char(c)) {
                i += l;
                end = i;
                continue;
            }
            if (c == kZwnj && i + l < text.size()) {
                auto next = utf8::decode(text, i + l);
                if (is_word_char(next.cp)) {  // half-space joins morphemes
                    i += l + next.len;
                    end = i;
                    continue;
                }
            }
            break;
        }
        stream.tokens.push_back({std::string(text.substr(start, end - start)), start, end});
    }
    return stream;
}

std::string trim_whitespace(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end) {
        const auto d = utf8::decode(text, begin);
        if (!is_space_char(d.cp)) break;
        begin += d.len;
    }
    // Walk forward to find the last non-space boundary; UTF-8 cannot be
    // decoded backwards without this.
    std::size_t last_end = begin;
    for (std::size_t i = begin; i < end;) {
        const auto d = utf8::decode(text, i);
        i += d.len;
        if (!is_space_char(d.cp)) last_end = i;
    }
    return std::string(text.substr(begin, last_end - begin));
}

std::vector<std::string> token_texts(std::string_view text) {
    auto stream = tokenize(text);
    std::vector<std::string> out;
    out.reserve(stream.tokens.size());
    for (auto& t : stream.tokens) out.push_back(std::move(t.text));
    return out;
}

double token_overlap_f1(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0.0;
    std::unordered_map<std::string, int> counts;
    for (const auto& t : b) ++counts[t];
    std::size_t common = 0;
    for (const auto& t : a) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(a.size());
    const double recall = static_cast<double>(common) / static_cast<double>(b.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace prag
