// SPDX-License-Identifier: Apache-2.0
#include "folio/rag/answer.hpp"

namespace folio::rag {

std::string assemble_prompt(const std::string& query, const std::vector<const Chunk*>& chunks) {
    std::string prompt;
    prompt +=
        "Answer using only the passages below. If the passages do not contain the answer, say "
        "that they are insufficient.\n";
    prompt += "Answer in the same language as the question.\n\n";
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const Chunk& chunk = *chunks[i];
        prompt += "[" + std::to_string(i + 1) + "] (pp. " +
                  std::to_string(chunk.page_span.first) + "–" +
                  std::to_string(chunk.page_span.second);
        if (chunk.year_range)
            prompt += ", years " + std::to_string(chunk.year_range->first) + "–" +
                      std::to_string(chunk.year_range->second);
        if (chunk.kind == Chunk::Kind::Footnote) prompt += ", footnote";
        prompt += ")\n";
        prompt += chunk.text;
        prompt += "\n\n";
    }
    prompt += "Question: " + query + "\n";
    return prompt;
}

AnswerResult answer(const std::string& query, const RagStore& store, const RouterModel& router,
                    net::EmbeddingBackend& embedder, net::ChatBackend& llm,
                    const SearchOptions& options) {
    const QueryClass cls = route(query, router, embedder);
    const RetrievalResult retrieved = cls == QueryClass::Specific
                                          ? search_specific(query, store, embedder, options)
                                          : search_general(query, store, embedder, options);

    std::vector<const Chunk*> chunks;
    AnswerResult result;
    result.route = cls;
    for (const RetrievedChunk& hit : retrieved.chunks) {
        if (const Chunk* chunk = store.find_chunk(hit.chunk_id)) {
            chunks.push_back(chunk);
            result.citations.push_back(chunk->id);
        }
    }

    const std::string prompt = assemble_prompt(query, chunks);
    net::ChatRequest request;
    request.prompt = prompt;
    request.fixture_key = "query";

    const net::RawModelOutput raw = llm.complete(request);
    result.response = raw.text;

    result.provenance = json::object();
    result.provenance["route"] = std::string(to_string(cls));
    if (cls == QueryClass::Specific) {
        json years = json::array();
        for (const auto& [a, b] : retrieved.years.intervals) years.push_back(json::array({a, b}));
        result.provenance["years"] = years;
        result.provenance["year_filtered"] = retrieved.year_filtered;
        result.provenance["fallback_unfiltered"] = retrieved.fallback_unfiltered;
    } else {
        result.provenance["mmr"] = true;
    }
    return result;
}

}  // namespace folio::rag
