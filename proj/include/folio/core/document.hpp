// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "folio/core/element.hpp"
#include "folio/core/json.hpp"

namespace folio {

// The per-page output of the extraction stage. Element order is the
// reading order emitted by the backend and is preserved everywhere.
struct PageExtraction {
    int page_number = 1;  // 1-based
    std::string source_image_id;
    std::vector<PageElement> elements;

    bool operator==(const PageExtraction&) const = default;
};

// A merged run of one or more elements (possibly spanning pages) with the
// cleaned text and carried-through metadata. `sources` lists the owning
// (page_number, element_index) pairs in reading order.
struct ContentUnit {
    std::string id;
    ElementCategory category = ElementCategory::Text;
    std::string text;
    std::vector<std::pair<int, int>> sources;
    json metadata = json::object();

    bool operator==(const ContentUnit&) const = default;
};

// The aggregated whole-document structure: original pages untouched,
// plus the refined content units derived from them.
struct DocumentRecord {
    std::string title;
    std::map<std::string, std::string> source_metadata;
    std::vector<PageExtraction> pages;
    std::vector<ContentUnit> units;

    bool operator==(const DocumentRecord&) const = default;
};

}  // namespace folio
