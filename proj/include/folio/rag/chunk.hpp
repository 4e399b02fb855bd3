// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folio/core/document.hpp"
#include "folio/core/json.hpp"

namespace folio::rag {

// A retrieval unit: a chronologically coherent run of content units, or a
// single footnote keyed to its page.
struct Chunk {
    enum class Kind { Content, Footnote };

    std::string id;
    Kind kind = Kind::Content;
    std::string text;
    std::optional<std::pair<int, int>> year_range;  // inclusive
    std::optional<std::string> chapter;
    std::pair<int, int> page_span{0, 0};
    std::string embedding_id;

    bool operator==(const Chunk&) const = default;
};

struct IngestOptions {
    int max_words_per_chunk = 1000;
    int year_min = 300;
    int year_max = 1600;
};

struct IngestResult {
    std::vector<Chunk> chunks;
    std::size_t content_count = 0;
    std::size_t footnote_count = 0;
};

// Walks the document's units in order. A new content chunk starts at each
// chapter boundary (title/header unit), at each year marker (standalone
// integer in the configured range) and whenever the word budget would be
// exceeded. A chunk's year range spans the markers it contains, carried
// forward from the last seen marker otherwise. Footnote units become
// footnote chunks; figures and tables are not chunked.
IngestResult ingest(const DocumentRecord& doc, const IngestOptions& options = {});

json chunk_to_json(const Chunk& chunk);
Chunk chunk_from_json(const json& node);

void save_chunks(const std::filesystem::path& path, const std::vector<Chunk>& chunks);
std::vector<Chunk> load_chunks(const std::filesystem::path& path);

// Standalone year tokens in [year_min, year_max] found in `text`,
// punctuation-trimmed; used by both ingestion and query filtering.
std::vector<int> find_year_markers(const std::string& text, int year_min, int year_max);

}  // namespace folio::rag
