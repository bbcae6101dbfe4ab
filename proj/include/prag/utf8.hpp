#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace prag::utf8 {

struct Decoded {
    char32_t cp;
    std::size_t len;
};

// Decodes the codepoint starting at byte `pos`. Malformed bytes decode as
// their own single-byte value so callers stay total on arbitrary input.
inline Decoded decode(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};

    auto cont = [&](std::size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    auto bits = [&](std::size_t i) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i]) & 0x3F);
    };

    if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        char32_t cp = ((b0 & 0x1Fu) << 6) | bits(pos + 1);
        if (cp >= 0x80) return {cp, 2};
    } else if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        char32_t cp = ((b0 & 0x0Fu) << 12) | (bits(pos + 1) << 6) | bits(pos + 2);
        if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) return {cp, 3};
    } else if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        char32_t cp = ((b0 & 0x07u) << 18) | (bits(pos + 1) << 12) | (bits(pos + 2) << 6) |
                      bits(pos + 3);
        if (cp >= 0x10000 && cp <= 0x10FFFF) return {cp, 4};
    }
    return {b0, 1};
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string from_codepoint(char32_t cp) {
    std::string s;
    append(s, cp);
    return s;
}

// Number of codepoints in a valid UTF-8 string.
inline std::size_t length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); i += decode(s, i).len) ++n;
    return n;
}

// Truncates to at most `max_codepoints`, never splitting a codepoint.
inline std::string truncate(std::string_view s, std::size_t max_codepoints) {
    std::size_t i = 0, n = 0;
    while (i < s.size() && n < max_codepoints) {
        i += decode(s, i).len;
        ++n;
    }
    return std::string(s.substr(0, i));
}

}  // namespace prag::utf8
