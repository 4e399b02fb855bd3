// SPDX-License-Identifier: Apache-2.0
#include "folio/util/text.hpp"

#include <algorithm>

namespace folio::util {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Appends one code point decoded from text[i...]; advances i.
char32_t decode_one(std::string_view text, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + static_cast<std::size_t>(extra) >= text.size()) {
        ++i;
        return kReplacement;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += 1 + extra;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kReplacement;
    return cp;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) out.push_back(decode_one(text, i));
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
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
    return out;
}

std::string encode_utf8(const std::u32string& code_points) {
    std::string out;
    out.reserve(code_points.size());
    for (char32_t cp : code_points) out += encode_utf8(cp);
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0, i = 0;
    while (i < text.size()) {
        decode_one(text, i);
        ++n;
    }
    return n;
}

std::string utf8_slice(std::string_view text, std::size_t start, std::size_t end) {
    std::string out;
    std::size_t n = 0, i = 0;
    while (i < text.size() && n < end) {
        std::size_t prev = i;
        decode_one(text, i);
        if (n >= start) out.append(text.substr(prev, i - prev));
        ++n;
    }
    return out;
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

std::string casefold(std::string_view text) {
    std::u32string cps = decode_utf8(text);
    for (char32_t& cp : cps) cp = to_lower(cp);
    return encode_utf8(cps);
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\f':
        case U'\v':
        case 0x00A0:  // no-break space
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_lowercase_letter(char32_t cp) {
    if (cp >= U'a' && cp <= U'z') return true;
    if (cp >= 0xDF && cp <= 0xFF && cp != 0xF7) return true;  // Latin-1, minus division sign
    return false;
}

bool is_uppercase_letter(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return true;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
    return false;
}

bool is_punctuation(char32_t cp) {
    static constexpr std::string_view kAsciiPunct = "!\"#%&'()*,-./:;?@[\\]_{}";
    if (cp < 0x80) return kAsciiPunct.find(static_cast<char>(cp)) != std::string_view::npos;
    switch (cp) {
        case 0x00A1:  // inverted exclamation
        case 0x00A7:  // section sign
        case 0x00AB:  // left guillemet
        case 0x00B6:  // pilcrow
        case 0x00B7:  // middle dot
        case 0x00BB:  // right guillemet
        case 0x00BF:  // inverted question
            return true;
        default:
            break;
    }
    // General Punctuation, excluding the spaces (2000-200A, handled as
    // whitespace), the fraction slash (2044) and the commercial minus (2052).
    if (cp >= 0x2010 && cp <= 0x2027) return true;
    if (cp >= 0x2030 && cp <= 0x205E) return cp != 0x2044 && cp != 0x2052;
    return false;
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::u32string cps = decode_utf8(text);
    std::u32string current;
    for (char32_t cp : cps) {
        if (is_whitespace(cp)) {
            if (!current.empty()) {
                tokens.push_back(encode_utf8(current));
                current.clear();
            }
        } else {
            current.push_back(cp);
        }
    }
    if (!current.empty()) tokens.push_back(encode_utf8(current));
    return tokens;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.emplace_back(line);
            start = i + 1;
        }
    }
    std::string_view line = text.substr(start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    return lines;
}

bool starts_with(std::string_view text, std::string_view prefix) {
    return text.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view text, std::string_view suffix) {
    return text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix;
}

std::string strip_trailing_whitespace(std::string_view line) {
    std::size_t end = line.size();
    while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r'))
        --end;
    return std::string(line.substr(0, end));
}

std::string trim(std::string_view text) {
    std::size_t begin = 0, end = text.size();
    const auto is_ascii_ws = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    while (begin < end && is_ascii_ws(text[begin])) ++begin;
    while (end > begin && is_ascii_ws(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

}  // namespace folio::util
