// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "folio/core/json.hpp"
#include "folio/core/schema.hpp"

namespace folio::extract {

// Fixed directive used for specialised document backends, which follow
// their own output schema and take no user instructions.
const std::string& specialised_prompt();

// Instruction-guided prompt for general-purpose backends: serialised
// schema, user instructions (omitted when empty), structured-output-only
// directive. Deterministic for fixed inputs.
std::string build_prompt(const ExtractionSchema& schema, const std::string& instructions);

// Second-phase prompt of the hybrid path: the serialised first-phase
// elements plus the user instructions.
std::string build_refinement_prompt(const json& phase1_elements, const std::string& instructions,
                                    const ExtractionSchema& schema);

}  // namespace folio::extract
