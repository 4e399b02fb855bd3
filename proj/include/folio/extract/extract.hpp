// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "folio/core/document.hpp"
#include "folio/core/schema.hpp"
#include "folio/net/backend.hpp"
#include "folio/prep/image.hpp"

namespace folio::extract {

// Single-backend page extraction (specialised or instruction-guided).
// Specialised backends reject user instructions; general ones require them.
PageExtraction extract_page(net::ChatBackend& backend, net::BackendConfig::Mode mode,
                            const prep::RasterImage& image, const ExtractionSchema& schema,
                            const std::optional<std::string>& instructions, int page_number,
                            const std::string& source_image_id);

struct HybridOptions {
    // When false, phase 2 must preserve phase 1's element count and
    // category sequence.
    bool allow_restructure = false;
};

// Raised when the second phase of the hybrid path produces an invalid or
// restructured result; carries both phase outputs.
class HybridError : public Error {
public:
    HybridError(const std::string& message, json phase1, std::string phase2_text)
        : Error(message), phase1_(std::move(phase1)), phase2_text_(std::move(phase2_text)) {}

    const json& phase1() const { return phase1_; }
    const std::string& phase2_text() const { return phase2_text_; }

private:
    json phase1_;
    std::string phase2_text_;
};

// Two-phase extraction: specialised backend produces the base result, a
// general backend refines it under the user instructions.
PageExtraction extract_page_hybrid(net::ChatBackend& specialised, net::ChatBackend& general,
                                   const prep::RasterImage& image,
                                   const ExtractionSchema& schema,
                                   const std::string& instructions, int page_number,
                                   const std::string& source_image_id,
                                   const HybridOptions& options = {});

struct PageInput {
    int page_number = 1;
    std::string source_image_id;
    prep::RasterImage image;               // preloaded page image, or
    std::filesystem::path image_path;      // a path the extractor loads lazily
};

enum class RunMode { Strict, Partial };

struct PageFailure {
    int page_number = 0;
    std::string source_image_id;
    std::string message;
};

struct ExtractionRun {
    std::vector<PageExtraction> pages;     // sorted by page_number
    std::vector<PageFailure> failures;     // sorted by page_number
};

using PageExtractor = std::function<PageExtraction(const PageInput&)>;

// Runs `extractor` over all pages with at most max_in_flight requests
// outstanding; results are reassembled in page order regardless of
// completion order. Strict mode rethrows the first failure after draining;
// partial mode collects failures alongside the successful pages.
ExtractionRun extract_document(const std::vector<PageInput>& pages,
                               const PageExtractor& extractor, int max_in_flight = 8,
                               RunMode mode = RunMode::Partial);

}  // namespace folio::extract
