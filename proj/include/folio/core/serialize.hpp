// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "folio/core/document.hpp"
#include "folio/core/json.hpp"

namespace folio {

// Canonical JSON forms of the pipeline's artifacts. Serialisation is
// deterministic; from-JSON functions throw ParseError on malformed input.

json element_to_json(const PageElement& element);
PageElement element_from_json(const json& node);

json page_to_json(const PageExtraction& page);
PageExtraction page_from_json(const json& node);

json unit_to_json(const ContentUnit& unit);
ContentUnit unit_from_json(const json& node);

json document_to_json(const DocumentRecord& doc);
DocumentRecord document_from_json(const json& node);

// File helpers; throw IoError on filesystem failure.
json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const json& value, int indent = 2);
std::string load_text_file(const std::filesystem::path& path);
void save_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace folio
