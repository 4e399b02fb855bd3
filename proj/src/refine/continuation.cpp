// SPDX-License-Identifier: Apache-2.0
#include "folio/refine/continuation.hpp"

#include <map>

#include "folio/core/error.hpp"
#include "folio/util/text.hpp"

namespace folio::refine {

namespace util = folio::util;

namespace {

// Sentence-final punctuation, including closing quote and guillemet.
const std::vector<std::string>& sentence_final_marks() {
    static const std::vector<std::string> marks = {".", "!", "?", "”", "»", ":"};
    return marks;
}

bool ends_sentence(const std::string& text) {
    const std::string stripped = util::strip_trailing_whitespace(text);
    for (const std::string& mark : sentence_final_marks())
        if (util::ends_with(stripped, mark)) return true;
    return false;
}

}  // namespace

std::vector<MergeLink> resolve_continuations(std::span<const PageExtraction> pages) {
    std::vector<MergeLink> links;
    for (std::size_t i = 0; i + 1 < pages.size(); ++i) {
        const PageExtraction& here = pages[i];
        const PageExtraction& next = pages[i + 1];
        if (here.elements.empty() || next.elements.empty()) continue;

        const PageElement& tail = here.elements.back();
        if (tail.category != ElementCategory::Text) continue;
        if (next.elements.front().category != ElementCategory::Text) continue;

        const std::string stripped = util::strip_trailing_whitespace(tail.text);
        const bool hyphen_break = util::ends_with(stripped, "-");
        if (!hyphen_break && ends_sentence(tail.text)) continue;

        // No title/header may open the next page before its first text element.
        bool blocked = false;
        for (const PageElement& e : next.elements) {
            if (e.category == ElementCategory::Text) break;
            if (e.category == ElementCategory::Title || e.category == ElementCategory::Header) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;

        int first_text = 0;
        for (std::size_t j = 0; j < next.elements.size(); ++j)
            if (next.elements[j].category == ElementCategory::Text) {
                first_text = static_cast<int>(j);
                break;
            }
        links.push_back({{here.page_number, static_cast<int>(here.elements.size()) - 1},
                         {next.page_number, first_text}});
    }
    return links;
}

std::vector<PageExtraction> propagate_metadata(std::vector<PageExtraction> pages,
                                               std::span<const MergeLink> links) {
    std::map<int, std::size_t> page_index;
    for (std::size_t i = 0; i < pages.size(); ++i) page_index[pages[i].page_number] = i;

    const auto element_at = [&](const ElementRef& ref) -> PageElement& {
        auto it = page_index.find(ref.page_number);
        if (it == page_index.end()) throw Error("link references unknown page");
        PageExtraction& page = pages[it->second];
        if (ref.element_index < 0 ||
            ref.element_index >= static_cast<int>(page.elements.size()))
            throw Error("link references nonexistent element");
        return page.elements[static_cast<std::size_t>(ref.element_index)];
    };

    // Links arrive ordered by page, so one forward pass carries values
    // transitively along whole chains.
    for (const MergeLink& link : links) {
        const PageElement& from = element_at(link.from);
        PageElement& to = element_at(link.to);
        if (!to.speaker && from.speaker) to.speaker = from.speaker;
        if (!to.date && from.date) to.date = from.date;
        if (!to.place && from.place) to.place = from.place;
    }
    return pages;
}

}  // namespace folio::refine
