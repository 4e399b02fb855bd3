// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace folio::refine {

// Rejoins words split by end-of-line hyphenation. A line ending in '-' is
// joined to the next line without hyphen or space when the next line starts
// with a lowercase letter; when it starts with an uppercase letter or digit
// the hyphen is kept (compound / proper-name break). Lines without a
// trailing hyphen join with a single space.
std::string dehyphenate(const std::string& text);

struct TypographyRules {
    // UTF-8 sequence -> replacement; guillemets are deliberately absent.
    std::vector<std::pair<std::string, std::string>> quote_map;
    bool collapse_whitespace = true;
    bool strip_trailing = true;

    static TypographyRules defaults();
};

// Maps quote styles, collapses space/tab runs, strips trailing spaces per
// line. Idempotent.
std::string normalise_typography(const std::string& text,
                                 const TypographyRules& rules = TypographyRules::defaults());

}  // namespace folio::refine
