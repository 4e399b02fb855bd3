// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "folio/core/element.hpp"

namespace folio::enrich {

struct GazetteerEntry {
    std::string kb_id;
    EntityType entity_type = EntityType::Person;
    std::string label;
    std::vector<std::string> aliases;
};

// Tab-separated authority file: kb_id, type, label, then any aliases.
// Lines starting with '#' and blank lines are skipped.
std::vector<GazetteerEntry> load_gazetteer(const std::filesystem::path& path);

struct LinkedEntity {
    EntityMention mention;
    std::string kb_id;
    std::string kb_label;
    double score = 0.0;  // in [0, 1]
};

struct LinkResult {
    std::vector<LinkedEntity> linked;
    std::vector<EntityMention> unlinked;
};

// Normalised edit-distance similarity of two casefolded names:
// 1 - distance / max(length), lengths in code points.
double name_similarity(const std::string& a, const std::string& b);

// Links each mention to the best same-type entry by name similarity over
// labels and aliases; below `threshold` the mention stays unlinked. Score
// ties resolve to the lexicographically smallest kb_id, which makes the
// result independent of gazetteer order.
LinkResult link_entities(std::span<const EntityMention> mentions,
                         std::span<const GazetteerEntry> gazetteer, double threshold = 0.85);

}  // namespace folio::enrich
