// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "folio/net/backend.hpp"
#include "folio/rag/search.hpp"

namespace folio::rag {

// Grounded prompt: answer-only-from-passages directive, language-matching
// directive, the labelled chunks (page span, year range), then the query.
// Deterministic for fixed inputs.
std::string assemble_prompt(const std::string& query, const std::vector<const Chunk*>& chunks);

struct AnswerResult {
    std::string response;
    std::vector<std::string> citations;  // every chunk id placed in the prompt
    QueryClass route = QueryClass::General;
    json provenance;
};

// route -> search (specific or general) -> assemble_prompt -> one chat call.
// Backend failures propagate as BackendError with the assembled prompt kept.
AnswerResult answer(const std::string& query, const RagStore& store, const RouterModel& router,
                    net::EmbeddingBackend& embedder, net::ChatBackend& llm,
                    const SearchOptions& options = {});

}  // namespace folio::rag
