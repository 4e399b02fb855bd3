// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "folio/core/error.hpp"
#include "folio/core/json.hpp"

namespace folio {

// One field of an extraction schema. Supports exactly the JSON Schema
// subset the pipeline consumes: type, properties, items, enum, required.
struct FieldSpec {
    enum class Kind { Object, Array, String, Integer };

    Kind kind = Kind::String;
    std::vector<std::string> enum_values;              // closed string set, string kind only
    std::shared_ptr<const FieldSpec> item_spec;        // array element spec, may be null
    std::vector<std::pair<std::string, FieldSpec>> nested;  // object properties, in order

    const FieldSpec* find_nested(const std::string& name) const;
};

struct ExtractionSchema {
    std::vector<std::pair<std::string, FieldSpec>> properties;
    std::vector<std::string> required;

    const FieldSpec* find(const std::string& name) const;
    bool is_required(const std::string& name) const;

    json to_json() const;
    std::string serialise() const;  // pretty-printed JSON text
};

// A single constraint failure. `path` addresses the offending field
// ("category", "entities[0].type", ...); "" is the instance root.
struct Violation {
    std::string path;
    std::string message;

    bool operator==(const Violation&) const = default;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

// Raised when parsed model output fails schema validation; keeps the full
// violation list for reporting.
class ValidationError : public Error {
public:
    ValidationError(const std::string& message, std::vector<Violation> violations)
        : Error(message), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

// Parses a schema document. Constructs outside the supported subset are a
// hard error naming the construct.
ExtractionSchema parse_schema(const std::string& text);
ExtractionSchema parse_schema_json(const json& doc);

// Collects every type, enum, required and undeclared-field violation of
// `instance` against `schema`. Empty result means the instance conforms.
std::vector<Violation> validate(const json& instance, const ExtractionSchema& schema);

}  // namespace folio
