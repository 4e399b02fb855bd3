// SPDX-License-Identifier: Apache-2.0
#include "folio/core/schema.hpp"

#include <algorithm>
#include <set>

namespace folio {

namespace {

FieldSpec::Kind kind_from_string(const std::string& name) {
    if (name == "object") return FieldSpec::Kind::Object;
    if (name == "array") return FieldSpec::Kind::Array;
    if (name == "string") return FieldSpec::Kind::String;
    if (name == "integer") return FieldSpec::Kind::Integer;
    throw SchemaError("unsupported construct: type '" + name + "'");
}

std::string kind_name(FieldSpec::Kind kind) {
    switch (kind) {
        case FieldSpec::Kind::Object: return "object";
        case FieldSpec::Kind::Array: return "array";
        case FieldSpec::Kind::String: return "string";
        case FieldSpec::Kind::Integer: return "integer";
    }
    return "?";
}

void reject_unknown_keys(const json& node, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : node.items()) {
        (void)value;
        if (!allowed.count(key))
            throw SchemaError("unsupported construct: '" + key + "' (" + where + ")");
    }
}

FieldSpec parse_field(const json& node, const std::string& where);

std::vector<std::pair<std::string, FieldSpec>> parse_properties(const json& node,
                                                                const std::string& where) {
    if (!node.is_object()) throw SchemaError("'properties' must be an object (" + where + ")");
    std::vector<std::pair<std::string, FieldSpec>> out;
    for (const auto& [name, spec] : node.items())
        out.emplace_back(name, parse_field(spec, where + "." + name));
    return out;
}

FieldSpec parse_field(const json& node, const std::string& where) {
    if (!node.is_object()) throw SchemaError("field spec must be an object (" + where + ")");
    if (!node.contains("type")) throw SchemaError("field spec missing 'type' (" + where + ")");
    if (!node["type"].is_string()) throw SchemaError("'type' must be a string (" + where + ")");

    FieldSpec spec;
    spec.kind = kind_from_string(node["type"].get<std::string>());

    switch (spec.kind) {
        case FieldSpec::Kind::Object:
            reject_unknown_keys(node, {"type", "properties"}, where);
            if (node.contains("properties"))
                spec.nested = parse_properties(node["properties"], where);
            break;
        case FieldSpec::Kind::Array:
            reject_unknown_keys(node, {"type", "items"}, where);
            if (node.contains("items"))
                spec.item_spec = std::make_shared<const FieldSpec>(
                    parse_field(node["items"], where + "[]"));
            break;
        case FieldSpec::Kind::String:
            reject_unknown_keys(node, {"type", "enum"}, where);
            if (node.contains("enum")) {
                const json& values = node["enum"];
                if (!values.is_array() || values.empty())
                    throw SchemaError("'enum' must be a non-empty array (" + where + ")");
                for (const json& v : values) {
                    if (!v.is_string())
                        throw SchemaError("'enum' values must be strings (" + where + ")");
                    spec.enum_values.push_back(v.get<std::string>());
                }
            }
            break;
        case FieldSpec::Kind::Integer:
            reject_unknown_keys(node, {"type"}, where);
            break;
    }
    return spec;
}

json field_to_json(const FieldSpec& spec) {
    json out = json::object();
    out["type"] = kind_name(spec.kind);
    switch (spec.kind) {
        case FieldSpec::Kind::Object:
            if (!spec.nested.empty()) {
                json props = json::object();
                for (const auto& [name, sub] : spec.nested) props[name] = field_to_json(sub);
                out["properties"] = props;
            }
            break;
        case FieldSpec::Kind::Array:
            if (spec.item_spec) out["items"] = field_to_json(*spec.item_spec);
            break;
        case FieldSpec::Kind::String:
            if (!spec.enum_values.empty()) out["enum"] = spec.enum_values;
            break;
        case FieldSpec::Kind::Integer:
            break;
    }
    return out;
}

void check_value(const json& value, const FieldSpec& spec, const std::string& path,
                 std::vector<Violation>& out) {
    switch (spec.kind) {
        case FieldSpec::Kind::String: {
            if (!value.is_string()) {
                out.push_back({path, "expected string"});
                return;
            }
            if (!spec.enum_values.empty()) {
                const auto& v = value.get_ref<const std::string&>();
                if (std::find(spec.enum_values.begin(), spec.enum_values.end(), v) ==
                    spec.enum_values.end())
                    out.push_back({path, "value '" + v + "' not in enum"});
            }
            return;
        }
        case FieldSpec::Kind::Integer:
            if (!value.is_number_integer() && !value.is_number_unsigned())
                out.push_back({path, "expected integer"});
            return;
        case FieldSpec::Kind::Array: {
            if (!value.is_array()) {
                out.push_back({path, "expected array"});
                return;
            }
            if (spec.item_spec) {
                for (std::size_t i = 0; i < value.size(); ++i)
                    check_value(value[i], *spec.item_spec,
                                path + "[" + std::to_string(i) + "]", out);
            }
            return;
        }
        case FieldSpec::Kind::Object: {
            if (!value.is_object()) {
                out.push_back({path, "expected object"});
                return;
            }
            for (const auto& [name, member] : value.items()) {
                const std::string member_path = path.empty() ? name : path + "." + name;
                const FieldSpec* sub = spec.find_nested(name);
                if (!sub) {
                    out.push_back({member_path, "undeclared field"});
                    continue;
                }
                check_value(member, *sub, member_path, out);
            }
            return;
        }
    }
}

}  // namespace

const FieldSpec* FieldSpec::find_nested(const std::string& name) const {
    for (const auto& [key, spec] : nested)
        if (key == name) return &spec;
    return nullptr;
}

const FieldSpec* ExtractionSchema::find(const std::string& name) const {
    for (const auto& [key, spec] : properties)
        if (key == name) return &spec;
    return nullptr;
}

bool ExtractionSchema::is_required(const std::string& name) const {
    return std::find(required.begin(), required.end(), name) != required.end();
}

json ExtractionSchema::to_json() const {
    json out = json::object();
    out["type"] = "object";
    json props = json::object();
    for (const auto& [name, spec] : properties) props[name] = field_to_json(spec);
    out["properties"] = props;
    out["required"] = required;
    return out;
}

std::string ExtractionSchema::serialise() const { return to_json().dump(2); }

ExtractionSchema parse_schema(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed schema document: ") + e.what());
    }
    return parse_schema_json(doc);
}

ExtractionSchema parse_schema_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("schema root must be an object");
    reject_unknown_keys(doc, {"type", "properties", "required"}, "root");
    if (!doc.contains("type") || !doc["type"].is_string() ||
        doc["type"].get<std::string>() != "object")
        throw SchemaError("schema root must have type 'object'");

    ExtractionSchema schema;
    if (doc.contains("properties")) schema.properties = parse_properties(doc["properties"], "root");
    if (doc.contains("required")) {
        if (!doc["required"].is_array()) throw SchemaError("'required' must be an array");
        for (const json& name : doc["required"]) {
            if (!name.is_string()) throw SchemaError("'required' entries must be strings");
            schema.required.push_back(name.get<std::string>());
        }
    }
    for (const std::string& name : schema.required)
        if (!schema.find(name))
            throw SchemaError("required name absent from properties: '" + name + "'");
    return schema;
}

std::vector<Violation> validate(const json& instance, const ExtractionSchema& schema) {
    std::vector<Violation> out;
    if (!instance.is_object()) {
        out.push_back({"", "expected object"});
        return out;
    }
    for (const std::string& name : schema.required)
        if (!instance.contains(name))
            out.push_back({"", "missing required property '" + name + "'"});
    for (const auto& [name, value] : instance.items()) {
        const FieldSpec* spec = schema.find(name);
        if (!spec) {
            out.push_back({name, "undeclared field"});
            continue;
        }
        check_value(value, *spec, name, out);
    }
    return out;
}

}  // namespace folio
