// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "folio/core/document.hpp"

namespace folio::refine {

struct ElementRef {
    int page_number = 0;
    int element_index = 0;

    bool operator==(const ElementRef&) const = default;
};

// A cross-page continuation: `from` is the final element of one page,
// `to` the first element of the next.
struct MergeLink {
    ElementRef from;
    ElementRef to;

    bool operator==(const MergeLink&) const = default;
};

// Links the final text element of page i to the first text element of page
// i+1 when the earlier text does not close a sentence (or ends in a
// hyphen) and no title/header opens the following page.
std::vector<MergeLink> resolve_continuations(std::span<const PageExtraction> pages);

// Carries speaker/date/place forward along continuation chains onto
// elements whose own value is absent; explicit values are never overwritten.
std::vector<PageExtraction> propagate_metadata(std::vector<PageExtraction> pages,
                                               std::span<const MergeLink> links);

}  // namespace folio::refine
