// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "folio/core/bbox.hpp"
#include "folio/core/json.hpp"

namespace folio {

// Closed set of layout element labels. Anything else coming back from a
// backend is a validation failure, never a silent coercion.
enum class ElementCategory { Title, Text, Header, Footnote, Figure, Table };

std::string_view to_string(ElementCategory category);
std::optional<ElementCategory> category_from_string(std::string_view name);

enum class EntityType { Person, Institution, Place };

std::string_view to_string(EntityType type);
std::optional<EntityType> entity_type_from_string(std::string_view name);

// A named-entity occurrence inside an element's text. Span offsets are
// code-point positions; the surface must equal the slice at [start, end).
struct EntityMention {
    std::string surface;
    EntityType entity_type = EntityType::Person;
    std::size_t span_start = 0;
    std::size_t span_end = 0;

    bool operator==(const EntityMention&) const = default;
};

// One detected layout element in reading order. `extras` holds values of
// schema-declared fields beyond the built-in ones, keyed by field name.
struct PageElement {
    BBox bbox;
    ElementCategory category = ElementCategory::Text;
    std::string text;
    std::optional<std::string> speaker;
    std::optional<std::string> date;
    std::optional<std::string> place;
    std::vector<EntityMention> entities;
    json extras = json::object();

    bool operator==(const PageElement&) const = default;
};

}  // namespace folio
