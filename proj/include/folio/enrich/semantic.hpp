// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "folio/core/document.hpp"
#include "folio/core/schema.hpp"
#include "folio/net/backend.hpp"

namespace folio::enrich {

struct SemanticResult {
    ContentUnit unit;   // input unit with the annotations merged in
    json annotations;   // what the model returned, post-validation
};

// Sends the unit text plus a task prompt to an LLM backend and merges the
// returned annotation object into the unit metadata. Annotation keys must
// be declared in the schema; existing metadata values are never overwritten.
SemanticResult infer_semantics(const ContentUnit& unit, const std::string& task_prompt,
                               net::ChatBackend& backend, const ExtractionSchema& schema);

}  // namespace folio::enrich
