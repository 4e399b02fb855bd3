// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "folio/core/document.hpp"
#include "folio/core/schema.hpp"
#include "folio/net/backend.hpp"

namespace folio::extract {

// Cuts model output down to its structured payload: the first fenced block
// when markdown fences are present, otherwise the outermost JSON value.
// Throws ParseError when no payload can be located.
std::string strip_to_payload(const std::string& text);

// Parses raw model output into a validated PageExtraction. Every element is
// checked against the schema; violations are reported with their element
// index. Element order is preserved as emitted.
PageExtraction parse_output(const net::RawModelOutput& raw, const ExtractionSchema& schema,
                            int page_number, const std::string& source_image_id);

}  // namespace folio::extract
