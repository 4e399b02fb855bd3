// SPDX-License-Identifier: Apache-2.0
#include "folio/refine/textops.hpp"

#include "folio/util/text.hpp"

namespace folio::refine {

namespace util = folio::util;

std::string dehyphenate(const std::string& text) {
    const std::vector<std::string> lines = util::split_lines(text);
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const bool last = i + 1 == lines.size();
        if (last) {
            out += line;
            break;
        }
        const std::u32string next = util::decode_utf8(lines[i + 1]);
        const char32_t next_first = next.empty() ? U'\0' : next.front();
        if (!line.empty() && line.back() == '-') {
            if (util::is_lowercase_letter(next_first)) {
                out.append(line, 0, line.size() - 1);  // drop the hyphen, no space
            } else {
                out += line;  // keep the hyphen, join directly
            }
        } else {
            out += line;
            out += ' ';
        }
    }
    return out;
}

TypographyRules TypographyRules::defaults() {
    TypographyRules rules;
    rules.quote_map = {
        {"“", "\""},  // left double
        {"”", "\""},  // right double
        {"„", "\""},  // low double
        {"‘", "'"},   // left single
        {"’", "'"},   // right single
        {"‚", "'"},   // low single
    };
    return rules;
}

std::string normalise_typography(const std::string& text, const TypographyRules& rules) {
    std::string mapped = text;
    for (const auto& [from, to] : rules.quote_map) {
        std::size_t pos = 0;
        while ((pos = mapped.find(from, pos)) != std::string::npos) {
            mapped.replace(pos, from.size(), to);
            pos += to.size();
        }
    }

    std::string out;
    out.reserve(mapped.size());
    std::string run;  // pending space/tab run within a line
    for (char c : mapped) {
        if (c == ' ' || c == '\t') {
            run += c;
            continue;
        }
        if (c == '\n') {
            if (!rules.strip_trailing && !run.empty())
                out += rules.collapse_whitespace ? std::string(" ") : run;
            run.clear();
            out += '\n';
            continue;
        }
        if (!run.empty()) {
            out += rules.collapse_whitespace ? std::string(" ") : run;
            run.clear();
        }
        out += c;
    }
    if (!rules.strip_trailing && !run.empty())
        out += rules.collapse_whitespace ? std::string(" ") : run;
    return out;
}

}  // namespace folio::refine
