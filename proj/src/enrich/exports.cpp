// SPDX-License-Identifier: Apache-2.0
#include "folio/enrich/exports.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "folio/core/error.hpp"
#include "folio/core/serialize.hpp"

namespace folio::enrich {

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c; break;
        }
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string json_scalar_to_string(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

}  // namespace

std::string export_tei(const DocumentRecord& doc) {
    std::string xml;
    xml += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    xml += "<TEI xmlns=\"http://www.tei-c.org/ns/1.0\">\n";
    xml += "  <teiHeader>\n";
    xml += "    <fileDesc>\n";
    xml += "      <titleStmt>\n";
    xml += "        <title>" + xml_escape(doc.title) + "</title>\n";
    xml += "      </titleStmt>\n";
    xml += "      <publicationStmt>\n";
    xml += "        <p>Produced by the folio pipeline</p>\n";
    xml += "      </publicationStmt>\n";
    xml += "      <sourceDesc>\n";
    if (doc.source_metadata.empty()) {
        xml += "        <p>unknown source</p>\n";
    } else {
        for (const auto& [key, value] : doc.source_metadata)
            xml += "        <p>" + xml_escape(key) + ": " + xml_escape(value) + "</p>\n";
    }
    xml += "      </sourceDesc>\n";
    xml += "    </fileDesc>\n";
    xml += "  </teiHeader>\n";
    xml += "  <text>\n";
    xml += "    <body>\n";

    // Units grouped by their first source page.
    std::set<int> page_numbers;
    for (const PageExtraction& page : doc.pages) page_numbers.insert(page.page_number);
    std::map<int, std::vector<const ContentUnit*>> by_page;
    for (const ContentUnit& unit : doc.units) {
        if (unit.sources.empty()) throw Error("unit '" + unit.id + "' has no sources");
        if (!page_numbers.count(unit.sources.front().first))
            throw Error("unit '" + unit.id + "' references a page that is not present");
        by_page[unit.sources.front().first].push_back(&unit);
    }
    for (const PageExtraction& page : doc.pages) {
        xml += "      <div type=\"page\" n=\"" + std::to_string(page.page_number) + "\">\n";
        auto it = by_page.find(page.page_number);
        if (it != by_page.end()) {
            for (const ContentUnit* unit : it->second) {
                const std::string text = xml_escape(unit->text);
                switch (unit->category) {
                    case ElementCategory::Title:
                    case ElementCategory::Header:
                        xml += "        <head>" + text + "</head>\n";
                        break;
                    case ElementCategory::Text:
                        xml += "        <p>" + text + "</p>\n";
                        break;
                    case ElementCategory::Footnote:
                        xml += "        <note place=\"foot\">" + text + "</note>\n";
                        break;
                    case ElementCategory::Figure:
                        xml += "        <figure><figDesc>" + text + "</figDesc></figure>\n";
                        break;
                    case ElementCategory::Table:
                        xml += "        <figure type=\"table\"><figDesc>" + text +
                               "</figDesc></figure>\n";
                        break;
                }
            }
        }
        xml += "      </div>\n";
    }
    xml += "    </body>\n";
    xml += "  </text>\n";
    xml += "</TEI>\n";
    return xml;
}

std::string export_csv(const DocumentRecord& doc) {
    // Union of metadata keys across units; linked_entities has its own column.
    std::set<std::string> metadata_keys;
    for (const ContentUnit& unit : doc.units)
        for (const auto& [key, value] : unit.metadata.items()) {
            (void)value;
            if (key != "linked_entities") metadata_keys.insert(key);
        }

    std::string csv = "id,category,page_first,page_last,text";
    for (const std::string& key : metadata_keys) csv += "," + csv_escape(key);
    csv += ",entity_ids\n";

    for (const ContentUnit& unit : doc.units) {
        if (unit.sources.empty()) throw Error("unit '" + unit.id + "' has no sources");
        csv += csv_escape(unit.id);
        csv += ",";
        csv += std::string(to_string(unit.category));
        csv += "," + std::to_string(unit.sources.front().first);
        csv += "," + std::to_string(unit.sources.back().first);
        csv += "," + csv_escape(unit.text);
        for (const std::string& key : metadata_keys) {
            csv += ",";
            if (unit.metadata.contains(key))
                csv += csv_escape(json_scalar_to_string(unit.metadata[key]));
        }
        std::string ids;
        if (unit.metadata.contains("linked_entities"))
            for (const json& link : unit.metadata["linked_entities"]) {
                if (!ids.empty()) ids += ";";
                ids += link["kb_id"].get<std::string>();
            }
        csv += "," + csv_escape(ids) + "\n";
    }
    return csv;
}

std::string export_jsonl(const DocumentRecord& doc) {
    std::string out;
    for (const ContentUnit& unit : doc.units) out += unit_to_json(unit).dump() + "\n";
    return out;
}

std::vector<ContentUnit> import_units_jsonl(const std::string& text) {
    std::vector<ContentUnit> units;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        try {
            units.push_back(unit_from_json(json::parse(line)));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSONL record: ") + e.what());
        }
    }
    return units;
}

}  // namespace folio::enrich
