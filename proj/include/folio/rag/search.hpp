// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "folio/enrich/index.hpp"
#include "folio/rag/chunk.hpp"
#include "folio/rag/router.hpp"

namespace folio::rag {

// Chunk store plus the cosine index over the chunk embeddings.
struct RagStore {
    std::vector<Chunk> chunks;
    enrich::VectorIndex index;

    const Chunk* find_chunk(const std::string& id) const;
};

// Builds the store by embedding every chunk text with `embedder`.
RagStore build_store(std::vector<Chunk> chunks, net::EmbeddingBackend& embedder);

// Greedy maximal-marginal-relevance selection over (id, vector) candidates:
// each step picks argmax of lambda*cos(q,d) - (1-lambda)*max_s cos(d,s);
// the first pick is pure relevance, objective ties resolve by id ascending.
std::vector<std::string> mmr_rerank(
    const net::EmbeddingVector& query,
    const std::vector<std::pair<std::string, net::EmbeddingVector>>& candidates, std::size_t k,
    double lambda = 0.5);

struct RetrievedChunk {
    std::string chunk_id;
    double similarity = 0.0;
    bool footnote_attachment = false;  // pulled in by a content result's page span
    std::string anchor_id;             // the content chunk that attached it
};

struct RetrievalResult {
    std::vector<RetrievedChunk> chunks;
    QueryClass route = QueryClass::General;
    YearFilter years;
    bool year_filtered = false;        // a year filter was applied
    bool fallback_unfiltered = false;  // filter matched nothing, fell back to plain top-k
};

struct SearchOptions {
    std::size_t k_specific = 5;
    std::size_t k_general = 8;
    std::size_t pool = 32;
    double lambda = 0.5;
    int year_min = 300;
    int year_max = 1600;
};

// Year-filtered top-k with footnote augmentation: content chunks whose year
// range overlaps the query years (plain top-k when no years are present or
// the filter empties the pool), each followed by the footnote chunks that
// share its page span.
RetrievalResult search_specific(const std::string& query, const RagStore& store,
                                net::EmbeddingBackend& embedder,
                                const SearchOptions& options = {});

// Cosine top-pool over content chunks, then MMR rerank to k.
RetrievalResult search_general(const std::string& query, const RagStore& store,
                               net::EmbeddingBackend& embedder,
                               const SearchOptions& options = {});

}  // namespace folio::rag
