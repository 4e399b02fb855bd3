// SPDX-License-Identifier: Apache-2.0
#include "folio/extract/parse.hpp"

#include <algorithm>

#include "folio/util/text.hpp"

namespace folio::extract {

namespace util = folio::util;

std::string strip_to_payload(const std::string& text) {
    const std::size_t fence = text.find("```");
    if (fence != std::string::npos) {
        // Skip the fence and an optional language tag up to end of line.
        std::size_t start = fence + 3;
        const std::size_t eol = text.find('\n', start);
        const std::size_t close = text.find("```", start);
        if (eol != std::string::npos && close != std::string::npos && eol < close)
            start = eol + 1;
        if (close == std::string::npos || close < start)
            throw ParseError("unterminated code fence in model output");
        return util::trim(text.substr(start, close - start));
    }
    const std::size_t first_obj = text.find_first_of("[{");
    if (first_obj == std::string::npos)
        throw ParseError("no structured payload in model output");
    const std::size_t last_obj = text.find_last_of("]}");
    if (last_obj == std::string::npos || last_obj < first_obj)
        throw ParseError("no structured payload in model output");
    return util::trim(text.substr(first_obj, last_obj - first_obj + 1));
}

namespace {

void append_violations(std::vector<Violation>& sink, const std::vector<Violation>& found,
                       std::size_t element_index) {
    const std::string prefix = "elements[" + std::to_string(element_index) + "]";
    for (const Violation& v : found)
        sink.push_back({v.path.empty() ? prefix : prefix + "." + v.path, v.message});
}

// Converts one validated element object; structural problems beyond the
// schema (bbox geometry, entity spans) are reported as violations.
std::optional<PageElement> build_element(const json& node, std::size_t element_index,
                                         std::vector<Violation>& sink) {
    const std::string prefix = "elements[" + std::to_string(element_index) + "]";
    PageElement element;

    const json& bbox = node["bbox"];
    if (!bbox.is_array() || bbox.size() != 4 ||
        !std::all_of(bbox.begin(), bbox.end(), [](const json& v) {
            return v.is_number_integer() || v.is_number_unsigned();
        })) {
        sink.push_back({prefix + ".bbox", "expected [x0, y0, x1, y1]"});
        return std::nullopt;
    }
    element.bbox = {bbox[0].get<int>(), bbox[1].get<int>(), bbox[2].get<int>(),
                    bbox[3].get<int>()};
    if (!element.bbox.valid()) {
        sink.push_back({prefix + ".bbox", "invalid box geometry (x0 < x1, y0 < y1, >= 0)"});
        return std::nullopt;
    }

    if (!node["category"].is_string() || !node["text"].is_string()) {
        sink.push_back({prefix, "category and text must be strings"});
        return std::nullopt;
    }
    const auto category = category_from_string(node["category"].get<std::string>());
    if (!category) {
        sink.push_back({prefix + ".category",
                        "unknown category '" + node["category"].get<std::string>() + "'"});
        return std::nullopt;
    }
    element.category = *category;
    element.text = node["text"].get<std::string>();

    bool ok = true;
    for (const auto& [key, value] : node.items()) {
        if (key == "bbox" || key == "category" || key == "text") continue;
        if (key == "speaker") {
            element.speaker = value.get<std::string>();
        } else if (key == "date") {
            element.date = value.get<std::string>();
        } else if (key == "place") {
            element.place = value.get<std::string>();
        } else if (key == "entities" && value.is_array()) {
            for (std::size_t m = 0; m < value.size(); ++m) {
                const json& node_m = value[m];
                const std::string path = prefix + ".entities[" + std::to_string(m) + "]";
                EntityMention mention;
                mention.surface = node_m["mention"].get<std::string>();
                const auto type = entity_type_from_string(node_m["type"].get<std::string>());
                if (!type) {
                    sink.push_back({path + ".type", "unknown entity type"});
                    ok = false;
                    continue;
                }
                mention.entity_type = *type;

                const std::u32string text_cps = util::decode_utf8(element.text);
                const std::u32string surface_cps = util::decode_utf8(mention.surface);
                if (node_m.contains("span")) {
                    mention.span_start = node_m["span"][0].get<std::size_t>();
                    mention.span_end = node_m["span"][1].get<std::size_t>();
                    if (mention.span_start >= mention.span_end ||
                        mention.span_end > text_cps.size() ||
                        text_cps.substr(mention.span_start,
                                        mention.span_end - mention.span_start) != surface_cps) {
                        sink.push_back({path + ".span",
                                        "span does not match the mention surface"});
                        ok = false;
                        continue;
                    }
                } else {
                    const std::size_t at = text_cps.find(surface_cps);
                    if (at == std::u32string::npos) {
                        sink.push_back(
                            {path, "mention not present in the element text"});
                        ok = false;
                        continue;
                    }
                    mention.span_start = at;
                    mention.span_end = at + surface_cps.size();
                }
                element.entities.push_back(std::move(mention));
            }
        } else {
            element.extras[key] = value;
        }
    }
    if (!ok) return std::nullopt;
    return element;
}

}  // namespace

PageExtraction parse_output(const net::RawModelOutput& raw, const ExtractionSchema& schema,
                            int page_number, const std::string& source_image_id) {
    const std::string payload = strip_to_payload(raw.text);
    json parsed;
    try {
        parsed = json::parse(payload);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model output is not valid JSON: ") + e.what());
    }

    const json* elements = nullptr;
    if (parsed.is_array()) {
        elements = &parsed;
    } else if (parsed.is_object() && parsed.contains("elements") &&
               parsed["elements"].is_array()) {
        elements = &parsed["elements"];
    } else {
        throw ParseError("model output is neither an element array nor a page object");
    }

    PageExtraction page;
    page.page_number = page_number;
    page.source_image_id = source_image_id;

    std::vector<Violation> violations;
    for (std::size_t i = 0; i < elements->size(); ++i) {
        const json& node = (*elements)[i];
        const std::vector<Violation> found = validate(node, schema);
        if (!found.empty()) {
            append_violations(violations, found, i);
            continue;
        }
        // The pipeline itself needs these three regardless of the schema.
        bool core_ok = true;
        for (const char* key : {"bbox", "category", "text"})
            if (!node.contains(key)) {
                violations.push_back({"elements[" + std::to_string(i) + "]",
                                      std::string("missing required property '") + key + "'"});
                core_ok = false;
            }
        if (!core_ok) continue;
        if (auto element = build_element(node, i, violations))
            page.elements.push_back(std::move(*element));
    }
    if (!violations.empty()) {
        std::string message = "extraction output failed validation (" +
                              std::to_string(violations.size()) + " violation(s); first at " +
                              violations.front().path + ": " + violations.front().message + ")";
        throw ValidationError(message, std::move(violations));
    }
    return page;
}

}  // namespace folio::extract
