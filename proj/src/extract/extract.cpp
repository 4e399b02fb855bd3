// SPDX-License-Identifier: Apache-2.0
#include "folio/extract/extract.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "folio/core/serialize.hpp"
#include "folio/extract/parse.hpp"
#include "folio/extract/prompt.hpp"

namespace folio::extract {

PageExtraction extract_page(net::ChatBackend& backend, net::BackendConfig::Mode mode,
                            const prep::RasterImage& image, const ExtractionSchema& schema,
                            const std::optional<std::string>& instructions, int page_number,
                            const std::string& source_image_id) {
    net::ChatRequest request;
    if (mode == net::BackendConfig::Mode::Specialised) {
        if (instructions && !instructions->empty())
            throw Error("specialised backends cannot accommodate user instructions");
        request.prompt = specialised_prompt();
    } else {
        if (!instructions || instructions->empty())
            throw Error("general backends require extraction instructions");
        request.prompt = build_prompt(schema, *instructions);
    }
    request.image = &image;
    request.fixture_key = source_image_id;

    const net::RawModelOutput raw = backend.complete(request);
    return parse_output(raw, schema, page_number, source_image_id);
}

PageExtraction extract_page_hybrid(net::ChatBackend& specialised, net::ChatBackend& general,
                                   const prep::RasterImage& image,
                                   const ExtractionSchema& schema,
                                   const std::string& instructions, int page_number,
                                   const std::string& source_image_id,
                                   const HybridOptions& options) {
    const PageExtraction base = extract_page(specialised, net::BackendConfig::Mode::Specialised,
                                             image, schema, std::nullopt, page_number,
                                             source_image_id);

    json base_elements = json::array();
    for (const PageElement& e : base.elements) base_elements.push_back(element_to_json(e));

    net::ChatRequest request;
    request.prompt = build_refinement_prompt(base_elements, instructions, schema);
    request.fixture_key = source_image_id;

    const net::RawModelOutput raw = general.complete(request);
    PageExtraction refined;
    try {
        refined = parse_output(raw, schema, page_number, source_image_id);
    } catch (const Error& e) {
        throw HybridError(std::string("hybrid phase 2 failed: ") + e.what(), base_elements,
                          raw.text);
    }

    if (!options.allow_restructure) {
        bool same_shape = refined.elements.size() == base.elements.size();
        if (same_shape)
            for (std::size_t i = 0; i < base.elements.size(); ++i)
                if (refined.elements[i].category != base.elements[i].category) {
                    same_shape = false;
                    break;
                }
        if (!same_shape)
            throw HybridError("hybrid phase 2 restructured the page without allow_restructure",
                              base_elements, raw.text);
    }
    return refined;
}

ExtractionRun extract_document(const std::vector<PageInput>& pages,
                               const PageExtractor& extractor, int max_in_flight,
                               RunMode mode) {
    if (max_in_flight < 1) throw Error("max_in_flight must be >= 1");

    struct Slot {
        std::optional<PageExtraction> page;
        std::optional<PageFailure> failure;
        std::exception_ptr error;
    };
    std::vector<Slot> slots(pages.size());
    std::atomic<std::size_t> next{0};

    // One worker per in-flight request; each runs at most one request at a
    // time, so the in-flight bound holds by construction.
    const std::size_t worker_count =
        std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), pages.size());
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
        workers.emplace_back([&]() {
            while (true) {
                const std::size_t index = next.fetch_add(1);
                if (index >= pages.size()) return;
                const PageInput& input = pages[index];
                try {
                    slots[index].page = extractor(input);
                } catch (const std::exception& e) {
                    slots[index].failure =
                        PageFailure{input.page_number, input.source_image_id, e.what()};
                    slots[index].error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& worker : workers) worker.join();

    ExtractionRun run;
    std::exception_ptr first_error;
    int first_error_page = 0;
    for (Slot& slot : slots) {
        if (slot.page) run.pages.push_back(std::move(*slot.page));
        if (slot.failure) {
            if (slot.error && (!first_error || slot.failure->page_number < first_error_page)) {
                first_error = slot.error;
                first_error_page = slot.failure->page_number;
            }
            run.failures.push_back(std::move(*slot.failure));
        }
    }
    std::sort(run.pages.begin(), run.pages.end(),
              [](const PageExtraction& a, const PageExtraction& b) {
                  return a.page_number < b.page_number;
              });
    std::sort(run.failures.begin(), run.failures.end(),
              [](const PageFailure& a, const PageFailure& b) {
                  return a.page_number < b.page_number;
              });
    if (mode == RunMode::Strict && !run.failures.empty()) {
        if (first_error) std::rethrow_exception(first_error);
        throw Error("page " + std::to_string(run.failures.front().page_number) +
                    " failed: " + run.failures.front().message);
    }
    return run;
}

}  // namespace folio::extract
