// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "folio/core/document.hpp"

namespace folio::enrich {

// Minimal TEI serialisation: header from the source metadata, one page
// division per page, text units as paragraphs, footnotes as notes, titles
// and headers as heads, figures/tables as typed placeholders. Units are
// placed in the division of their first source page.
std::string export_tei(const DocumentRecord& doc);

// One row per content unit: id, category, page span, text, flattened
// metadata columns (union of keys, sorted) and semicolon-joined linked
// entity ids. RFC 4180 quoting.
std::string export_csv(const DocumentRecord& doc);

// One JSON object per content unit, one per line.
std::string export_jsonl(const DocumentRecord& doc);

std::vector<ContentUnit> import_units_jsonl(const std::string& text);

}  // namespace folio::enrich
