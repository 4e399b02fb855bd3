// SPDX-License-Identifier: Apache-2.0
#include "folio/core/serialize.hpp"

#include <fstream>
#include <sstream>

#include "folio/core/error.hpp"

namespace folio {

namespace {

json mention_to_json(const EntityMention& mention) {
    json out = json::object();
    out["mention"] = mention.surface;
    out["type"] = std::string(to_string(mention.entity_type));
    out["span"] = json::array({mention.span_start, mention.span_end});
    return out;
}

EntityMention mention_from_json(const json& node) {
    if (!node.is_object() || !node.contains("mention") || !node.contains("type"))
        throw ParseError("entity mention needs 'mention' and 'type'");
    EntityMention mention;
    mention.surface = node["mention"].get<std::string>();
    auto type = entity_type_from_string(node["type"].get<std::string>());
    if (!type) throw ParseError("unknown entity type '" + node["type"].get<std::string>() + "'");
    mention.entity_type = *type;
    if (node.contains("span")) {
        const json& span = node["span"];
        if (!span.is_array() || span.size() != 2)
            throw ParseError("entity span must be [start, end]");
        mention.span_start = span[0].get<std::size_t>();
        mention.span_end = span[1].get<std::size_t>();
    }
    return mention;
}

}  // namespace

json element_to_json(const PageElement& element) {
    json out = json::object();
    out["bbox"] = json::array({element.bbox.x0, element.bbox.y0, element.bbox.x1, element.bbox.y1});
    out["category"] = std::string(to_string(element.category));
    out["text"] = element.text;
    if (element.speaker) out["speaker"] = *element.speaker;
    if (element.date) out["date"] = *element.date;
    if (element.place) out["place"] = *element.place;
    if (!element.entities.empty()) {
        json mentions = json::array();
        for (const EntityMention& m : element.entities) mentions.push_back(mention_to_json(m));
        out["entities"] = mentions;
    }
    for (const auto& [key, value] : element.extras.items()) out[key] = value;
    return out;
}

PageElement element_from_json(const json& node) {
    if (!node.is_object()) throw ParseError("element must be an object");
    for (const char* key : {"bbox", "category", "text"})
        if (!node.contains(key))
            throw ParseError(std::string("element missing '") + key + "'");

    PageElement element;
    const json& bbox = node["bbox"];
    if (!bbox.is_array() || bbox.size() != 4)
        throw ParseError("bbox must be [x0, y0, x1, y1]");
    element.bbox = {bbox[0].get<int>(), bbox[1].get<int>(), bbox[2].get<int>(),
                    bbox[3].get<int>()};
    if (!element.bbox.valid()) throw ParseError("bbox violates x0 < x1, y0 < y1, >= 0");

    auto category = category_from_string(node["category"].get<std::string>());
    if (!category)
        throw ParseError("unknown category '" + node["category"].get<std::string>() + "'");
    element.category = *category;
    element.text = node["text"].get<std::string>();

    for (const auto& [key, value] : node.items()) {
        if (key == "bbox" || key == "category" || key == "text") continue;
        if (key == "speaker") {
            element.speaker = value.get<std::string>();
        } else if (key == "date") {
            element.date = value.get<std::string>();
        } else if (key == "place") {
            element.place = value.get<std::string>();
        } else if (key == "entities") {
            if (!value.is_array()) throw ParseError("'entities' must be an array");
            for (const json& m : value) element.entities.push_back(mention_from_json(m));
        } else {
            element.extras[key] = value;
        }
    }
    return element;
}

json page_to_json(const PageExtraction& page) {
    json out = json::object();
    out["page_number"] = page.page_number;
    out["source_image_id"] = page.source_image_id;
    json elements = json::array();
    for (const PageElement& e : page.elements) elements.push_back(element_to_json(e));
    out["elements"] = elements;
    return out;
}

PageExtraction page_from_json(const json& node) {
    if (!node.is_object() || !node.contains("page_number") || !node.contains("elements"))
        throw ParseError("page record needs 'page_number' and 'elements'");
    PageExtraction page;
    page.page_number = node["page_number"].get<int>();
    if (page.page_number < 1) throw ParseError("page_number must be >= 1");
    if (node.contains("source_image_id"))
        page.source_image_id = node["source_image_id"].get<std::string>();
    for (const json& e : node["elements"]) page.elements.push_back(element_from_json(e));
    return page;
}

json unit_to_json(const ContentUnit& unit) {
    json out = json::object();
    out["id"] = unit.id;
    out["category"] = std::string(to_string(unit.category));
    out["text"] = unit.text;
    json sources = json::array();
    for (const auto& [page, index] : unit.sources) sources.push_back(json::array({page, index}));
    out["sources"] = sources;
    out["metadata"] = unit.metadata;
    return out;
}

ContentUnit unit_from_json(const json& node) {
    if (!node.is_object() || !node.contains("id") || !node.contains("category") ||
        !node.contains("text") || !node.contains("sources"))
        throw ParseError("unit record needs id, category, text, sources");
    ContentUnit unit;
    unit.id = node["id"].get<std::string>();
    auto category = category_from_string(node["category"].get<std::string>());
    if (!category) throw ParseError("unknown category in unit record");
    unit.category = *category;
    unit.text = node["text"].get<std::string>();
    for (const json& s : node["sources"]) {
        if (!s.is_array() || s.size() != 2) throw ParseError("unit source must be [page, index]");
        unit.sources.emplace_back(s[0].get<int>(), s[1].get<int>());
    }
    if (node.contains("metadata")) unit.metadata = node["metadata"];
    return unit;
}

json document_to_json(const DocumentRecord& doc) {
    json out = json::object();
    out["title"] = doc.title;
    json source = json::object();
    for (const auto& [key, value] : doc.source_metadata) source[key] = value;
    out["source"] = source;
    json pages = json::array();
    for (const PageExtraction& p : doc.pages) pages.push_back(page_to_json(p));
    out["pages"] = pages;
    json units = json::array();
    for (const ContentUnit& u : doc.units) units.push_back(unit_to_json(u));
    out["units"] = units;
    return out;
}

DocumentRecord document_from_json(const json& node) {
    if (!node.is_object()) throw ParseError("document record must be an object");
    DocumentRecord doc;
    if (node.contains("title")) doc.title = node["title"].get<std::string>();
    if (node.contains("source"))
        for (const auto& [key, value] : node["source"].items())
            doc.source_metadata[key] = value.get<std::string>();
    if (node.contains("pages"))
        for (const json& p : node["pages"]) doc.pages.push_back(page_from_json(p));
    if (node.contains("units"))
        for (const json& u : node["units"]) doc.units.push_back(unit_from_json(u));
    return doc;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void save_json_file(const std::filesystem::path& path, const json& value, int indent) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << value.dump(indent) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::string load_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void save_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace folio
