// SPDX-License-Identifier: Apache-2.0
#include "folio/extract/prompt.hpp"

namespace folio::extract {

const std::string& specialised_prompt() {
    static const std::string prompt =
        "Analyse the document page: detect every layout element, transcribe its text in "
        "reading order and return the structured result.";
    return prompt;
}

std::string build_prompt(const ExtractionSchema& schema, const std::string& instructions) {
    std::string prompt;
    prompt +=
        "Extract every layout element from the attached page image. Return a JSON array of "
        "objects, one per element in reading order, conforming to this JSON schema:\n\n";
    prompt += schema.serialise();
    prompt += "\n";
    if (!instructions.empty()) {
        prompt += "\nAdditional instructions:\n";
        prompt += instructions;
        prompt += "\n";
    }
    prompt += "\nEmit only the JSON payload, with no commentary and no markdown fences.";
    return prompt;
}

std::string build_refinement_prompt(const json& phase1_elements, const std::string& instructions,
                                    const ExtractionSchema& schema) {
    std::string prompt;
    prompt += "Below is the structured extraction of one document page:\n\n";
    prompt += phase1_elements.dump(2);
    prompt += "\n\nRefine and enhance it according to these instructions:\n";
    prompt += instructions;
    prompt += "\n\nEvery element must conform to this JSON schema:\n\n";
    prompt += schema.serialise();
    prompt += "\n\nEmit only the refined JSON array, with no commentary and no markdown fences.";
    return prompt;
}

}  // namespace folio::extract
