// SPDX-License-Identifier: Apache-2.0
#include "folio/enrich/semantic.hpp"

#include "folio/extract/parse.hpp"

namespace folio::enrich {

SemanticResult infer_semantics(const ContentUnit& unit, const std::string& task_prompt,
                               net::ChatBackend& backend, const ExtractionSchema& schema) {
    net::ChatRequest request;
    request.prompt = task_prompt + "\n\nText:\n" + unit.text +
                     "\n\nReturn a single JSON object mapping field names to values, with no "
                     "commentary and no markdown fences.";
    request.fixture_key = unit.id;

    const net::RawModelOutput raw = backend.complete(request);
    const std::string payload = extract::strip_to_payload(raw.text);
    json annotations;
    try {
        annotations = json::parse(payload);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("semantic inference output is not valid JSON: ") + e.what());
    }
    if (!annotations.is_object())
        throw ParseError("semantic inference output must be a JSON object");

    for (const auto& [key, value] : annotations.items()) {
        (void)value;
        if (!schema.find(key))
            throw ValidationError("semantic annotation key '" + key +
                                      "' is not declared in the schema",
                                  {{key, "undeclared field"}});
    }

    SemanticResult result{unit, annotations};
    for (const auto& [key, value] : annotations.items())
        if (!result.unit.metadata.contains(key)) result.unit.metadata[key] = value;
    return result;
}

}  // namespace folio::enrich
