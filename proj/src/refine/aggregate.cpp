// SPDX-License-Identifier: Apache-2.0
#include "folio/refine/aggregate.hpp"

#include <algorithm>
#include <cstdio>

#include "folio/core/error.hpp"
#include "folio/refine/textops.hpp"

namespace folio::refine {

DocumentRecord aggregate(std::vector<PageExtraction> pages, std::span<const MergeLink> links,
                         std::string title, std::map<std::string, std::string> source_metadata) {
    std::sort(pages.begin(), pages.end(),
              [](const PageExtraction& a, const PageExtraction& b) {
                  return a.page_number < b.page_number;
              });

    std::map<int, std::size_t> page_index;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (page_index.count(pages[i].page_number))
            throw Error("duplicate page_number " + std::to_string(pages[i].page_number));
        page_index[pages[i].page_number] = i;
    }

    const auto locate = [&](const ElementRef& ref) -> std::pair<std::size_t, std::size_t> {
        auto it = page_index.find(ref.page_number);
        if (it == page_index.end())
            throw Error("link references unknown page " + std::to_string(ref.page_number));
        const PageExtraction& page = pages[it->second];
        if (ref.element_index < 0 ||
            ref.element_index >= static_cast<int>(page.elements.size()))
            throw Error("link references nonexistent element");
        return {it->second, static_cast<std::size_t>(ref.element_index)};
    };

    // successor[(page idx, elem idx)] -> continuation element; an element has
    // at most one predecessor and one successor.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> successor;
    std::map<std::pair<std::size_t, std::size_t>, bool> has_predecessor;
    for (const MergeLink& link : links) {
        const auto from = locate(link.from);
        const auto to = locate(link.to);
        successor[from] = to;
        has_predecessor[to] = true;
    }

    DocumentRecord doc;
    doc.title = std::move(title);
    doc.source_metadata = std::move(source_metadata);

    int next_id = 1;
    for (std::size_t p = 0; p < pages.size(); ++p) {
        for (std::size_t e = 0; e < pages[p].elements.size(); ++e) {
            if (has_predecessor.count({p, e})) continue;  // consumed by a chain head

            ContentUnit unit;
            char id[16];
            std::snprintf(id, sizeof(id), "u%04d", next_id++);
            unit.id = id;
            unit.category = pages[p].elements[e].category;

            std::string joined;
            std::pair<std::size_t, std::size_t> cursor{p, e};
            bool first = true;
            while (true) {
                const PageExtraction& page = pages[cursor.first];
                const PageElement& element = page.elements[cursor.second];
                if (!first) joined += '\n';
                joined += element.text;
                unit.sources.emplace_back(page.page_number,
                                          static_cast<int>(cursor.second));
                // First present value along the chain wins per field.
                if (element.speaker && !unit.metadata.contains("speaker"))
                    unit.metadata["speaker"] = *element.speaker;
                if (element.date && !unit.metadata.contains("date"))
                    unit.metadata["date"] = *element.date;
                if (element.place && !unit.metadata.contains("place"))
                    unit.metadata["place"] = *element.place;
                first = false;
                auto it = successor.find(cursor);
                if (it == successor.end()) break;
                cursor = it->second;
            }
            unit.text = normalise_typography(dehyphenate(joined));
            doc.units.push_back(std::move(unit));
        }
    }

    doc.pages = std::move(pages);
    return doc;
}

}  // namespace folio::refine
