// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "folio/core/json.hpp"
#include "folio/net/embedding.hpp"

namespace folio::rag {

enum class QueryClass { Specific, General };

std::string_view to_string(QueryClass cls);

struct Prototype {
    std::string text;
    net::EmbeddingVector vector;  // unit-normalised
};

// Exemplar-based query classifier: nearest-prototype by cosine with a
// decision margin. Prototypes ship as editable data, embedded at load time.
struct RouterModel {
    std::vector<Prototype> specific;
    std::vector<Prototype> general;
    double margin = 0.0;

    void check() const;
};

// File format: {"margin": 0.0, "specific": ["...", ...], "general": [...]}.
RouterModel load_router(const std::filesystem::path& path, net::EmbeddingBackend& embedder);
RouterModel router_from_json(const json& node, net::EmbeddingBackend& embedder);

// Specific iff max cosine to the specific prototypes beats the general side
// by more than the margin; ties fall to general.
QueryClass route(const std::string& query, const RouterModel& router,
                 net::EmbeddingBackend& embedder);

// Year constraints extracted from a query: single years and inclusive
// "1450-1485" ranges, matched as standalone tokens in [year_min, year_max].
struct YearFilter {
    std::vector<std::pair<int, int>> intervals;

    bool empty() const { return intervals.empty(); }
    bool overlaps(int start, int end) const {
        for (const auto& [a, b] : intervals)
            if (start <= b && a <= end) return true;
        return false;
    }
};

YearFilter extract_years(const std::string& query, int year_min = 300, int year_max = 1600);

}  // namespace folio::rag
