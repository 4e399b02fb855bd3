// SPDX-License-Identifier: Apache-2.0
#include "folio/rag/search.hpp"

#include <algorithm>
#include <set>

#include "folio/core/error.hpp"

namespace folio::rag {

const Chunk* RagStore::find_chunk(const std::string& id) const {
    for (const Chunk& chunk : chunks)
        if (chunk.id == id) return &chunk;
    return nullptr;
}

RagStore build_store(std::vector<Chunk> chunks, net::EmbeddingBackend& embedder) {
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const Chunk& chunk : chunks) texts.push_back(chunk.text);
    const auto vectors = embedder.embed(texts);

    RagStore store{std::move(chunks), enrich::VectorIndex(embedder.dimension())};
    for (std::size_t i = 0; i < store.chunks.size(); ++i) {
        const Chunk& chunk = store.chunks[i];
        json metadata = json::object();
        metadata["kind"] = chunk.kind == Chunk::Kind::Content ? "content" : "footnote";
        if (chunk.year_range) {
            metadata["year_start"] = chunk.year_range->first;
            metadata["year_end"] = chunk.year_range->second;
        }
        metadata["page_first"] = chunk.page_span.first;
        metadata["page_last"] = chunk.page_span.second;
        store.index.add(chunk.embedding_id, vectors[i], metadata);
    }
    return store;
}

std::vector<std::string> mmr_rerank(
    const net::EmbeddingVector& query,
    const std::vector<std::pair<std::string, net::EmbeddingVector>>& candidates, std::size_t k,
    double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw Error("MMR lambda must be in [0, 1]");
    if (k < 1) throw Error("MMR k must be >= 1");

    std::vector<std::size_t> remaining(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) remaining[i] = i;

    std::vector<double> relevance(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        relevance[i] = net::dot(query, candidates[i].second);

    std::vector<std::size_t> selected;
    std::vector<std::string> out;
    while (out.size() < k && !remaining.empty()) {
        std::size_t best_pos = 0;
        double best_objective = 0.0;
        bool first_candidate = true;
        for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
            const std::size_t i = remaining[pos];
            double redundancy = 0.0;
            if (!selected.empty()) {
                redundancy = net::dot(candidates[i].second, candidates[selected[0]].second);
                for (std::size_t s = 1; s < selected.size(); ++s)
                    redundancy = std::max(
                        redundancy, net::dot(candidates[i].second, candidates[selected[s]].second));
            }
            const double objective = selected.empty()
                                         ? relevance[i]
                                         : lambda * relevance[i] - (1.0 - lambda) * redundancy;
            const bool better =
                first_candidate || objective > best_objective ||
                (objective == best_objective &&
                 candidates[i].first < candidates[remaining[best_pos]].first);
            if (better) {
                best_pos = pos;
                best_objective = objective;
                first_candidate = false;
            }
        }
        selected.push_back(remaining[best_pos]);
        out.push_back(candidates[remaining[best_pos]].first);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }
    return out;
}

namespace {

bool is_content(const json& metadata) {
    return metadata.contains("kind") && metadata["kind"].get<std::string>() == "content";
}

void attach_footnotes(const RagStore& store, RetrievalResult& result) {
    std::vector<RetrievedChunk> augmented;
    std::set<std::string> seen;
    for (const RetrievedChunk& hit : result.chunks) {
        augmented.push_back(hit);
        const Chunk* content = store.find_chunk(hit.chunk_id);
        if (!content) continue;
        for (const Chunk& note : store.chunks) {
            if (note.kind != Chunk::Kind::Footnote) continue;
            if (seen.count(note.id)) continue;
            const bool shares_page = note.page_span.first <= content->page_span.second &&
                                     content->page_span.first <= note.page_span.second;
            if (shares_page) {
                augmented.push_back({note.id, 0.0, true, content->id});
                seen.insert(note.id);
            }
        }
    }
    result.chunks = std::move(augmented);
}

}  // namespace

RetrievalResult search_specific(const std::string& query, const RagStore& store,
                                net::EmbeddingBackend& embedder, const SearchOptions& options) {
    RetrievalResult result;
    result.route = QueryClass::Specific;
    result.years = extract_years(query, options.year_min, options.year_max);
    if (store.chunks.empty()) return result;

    const net::EmbeddingVector query_vec = embedder.embed({query}).front();

    const auto year_filter = [&](const json& metadata) {
        if (!is_content(metadata)) return false;
        if (result.years.empty()) return true;
        if (!metadata.contains("year_start")) return false;
        return result.years.overlaps(metadata["year_start"].get<int>(),
                                     metadata["year_end"].get<int>());
    };

    std::vector<enrich::SearchHit> hits =
        store.index.search(query_vec, options.k_specific, year_filter);
    result.year_filtered = !result.years.empty();
    if (hits.empty() && !result.years.empty()) {
        // Nothing overlaps the requested years: fall back to unfiltered
        // search, flagged in the provenance.
        hits = store.index.search(query_vec, options.k_specific, is_content);
        result.fallback_unfiltered = true;
    }
    for (const enrich::SearchHit& hit : hits)
        result.chunks.push_back({hit.id, hit.similarity, false, ""});
    attach_footnotes(store, result);
    return result;
}

RetrievalResult search_general(const std::string& query, const RagStore& store,
                               net::EmbeddingBackend& embedder, const SearchOptions& options) {
    if (options.pool < options.k_general)
        throw Error("search pool must be >= k");
    RetrievalResult result;
    result.route = QueryClass::General;
    if (store.chunks.empty()) return result;

    const net::EmbeddingVector query_vec = embedder.embed({query}).front();
    const std::vector<enrich::SearchHit> pool =
        store.index.search(query_vec, options.pool, is_content);
    if (pool.empty()) return result;

    std::vector<std::pair<std::string, net::EmbeddingVector>> candidates;
    candidates.reserve(pool.size());
    for (const enrich::SearchHit& hit : pool)
        candidates.emplace_back(hit.id, store.index.find(hit.id)->vector);

    const std::vector<std::string> order =
        mmr_rerank(net::normalised(query_vec), candidates, options.k_general, options.lambda);
    for (const std::string& id : order) {
        double similarity = 0.0;
        for (const enrich::SearchHit& hit : pool)
            if (hit.id == id) {
                similarity = hit.similarity;
                break;
            }
        result.chunks.push_back({id, similarity, false, ""});
    }
    return result;
}

}  // namespace folio::rag
