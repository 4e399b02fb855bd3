// SPDX-License-Identifier: Apache-2.0
#include "folio/enrich/gazetteer.hpp"

#include <fstream>

#include "folio/core/error.hpp"
#include "folio/evaluate/metrics.hpp"
#include "folio/util/text.hpp"

namespace folio::enrich {

namespace util = folio::util;

std::vector<GazetteerEntry> load_gazetteer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open gazetteer " + path.string());

    std::vector<GazetteerEntry> entries;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() < 3)
            throw ParseError("gazetteer line " + std::to_string(line_number) +
                             ": expected kb_id, type, label");
        if (fields[0].empty() || fields[2].empty())
            throw ParseError("gazetteer line " + std::to_string(line_number) +
                             ": kb_id and label must be non-empty");
        GazetteerEntry entry;
        entry.kb_id = fields[0];
        const auto type = entity_type_from_string(fields[1]);
        if (!type)
            throw ParseError("gazetteer line " + std::to_string(line_number) +
                             ": unknown entity type '" + fields[1] + "'");
        entry.entity_type = *type;
        entry.label = fields[2];
        for (std::size_t i = 3; i < fields.size(); ++i)
            if (!fields[i].empty()) entry.aliases.push_back(fields[i]);
        entries.push_back(std::move(entry));
    }
    return entries;
}

double name_similarity(const std::string& a, const std::string& b) {
    const std::u32string ca = util::decode_utf8(util::casefold(a));
    const std::u32string cb = util::decode_utf8(util::casefold(b));
    const std::size_t longest = std::max(ca.size(), cb.size());
    if (longest == 0) return 1.0;
    const auto counts = evaluate::edit_distance(ca, cb);
    return 1.0 - static_cast<double>(counts.distance) / static_cast<double>(longest);
}

LinkResult link_entities(std::span<const EntityMention> mentions,
                         std::span<const GazetteerEntry> gazetteer, double threshold) {
    LinkResult result;
    for (const EntityMention& mention : mentions) {
        double best_score = -1.0;
        const GazetteerEntry* best_entry = nullptr;
        for (const GazetteerEntry& entry : gazetteer) {
            if (entry.entity_type != mention.entity_type) continue;
            double score = name_similarity(mention.surface, entry.label);
            for (const std::string& alias : entry.aliases)
                score = std::max(score, name_similarity(mention.surface, alias));
            if (score > best_score ||
                (score == best_score && best_entry && entry.kb_id < best_entry->kb_id)) {
                best_score = score;
                best_entry = &entry;
            }
        }
        if (best_entry && best_score >= threshold) {
            result.linked.push_back({mention, best_entry->kb_id, best_entry->label, best_score});
        } else {
            result.unlinked.push_back(mention);
        }
    }
    return result;
}

}  // namespace folio::enrich
