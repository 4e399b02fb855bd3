// SPDX-License-Identifier: Apache-2.0
#include "folio/core/element.hpp"

namespace folio {

std::string_view to_string(ElementCategory category) {
    switch (category) {
        case ElementCategory::Title: return "title";
        case ElementCategory::Text: return "text";
        case ElementCategory::Header: return "header";
        case ElementCategory::Footnote: return "footnote";
        case ElementCategory::Figure: return "figure";
        case ElementCategory::Table: return "table";
    }
    return "?";
}

std::optional<ElementCategory> category_from_string(std::string_view name) {
    if (name == "title") return ElementCategory::Title;
    if (name == "text") return ElementCategory::Text;
    if (name == "header") return ElementCategory::Header;
    if (name == "footnote") return ElementCategory::Footnote;
    if (name == "figure") return ElementCategory::Figure;
    if (name == "table") return ElementCategory::Table;
    return std::nullopt;
}

std::string_view to_string(EntityType type) {
    switch (type) {
        case EntityType::Person: return "person";
        case EntityType::Institution: return "institution";
        case EntityType::Place: return "place";
    }
    return "?";
}

std::optional<EntityType> entity_type_from_string(std::string_view name) {
    if (name == "person") return EntityType::Person;
    if (name == "institution") return EntityType::Institution;
    if (name == "place") return EntityType::Place;
    return std::nullopt;
}

}  // namespace folio
