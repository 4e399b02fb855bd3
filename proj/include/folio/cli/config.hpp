// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folio/core/json.hpp"
#include "folio/extract/extract.hpp"
#include "folio/net/backend.hpp"
#include "folio/prep/ops.hpp"
#include "folio/rag/search.hpp"

namespace folio::cli {

enum class ExtractionPath { A, B, C };

struct ExtractionConfig {
    ExtractionPath path = ExtractionPath::A;
    net::BackendConfig backend;                   // paths A, B; phase 1 of C
    std::optional<net::BackendConfig> refiner;    // phase 2 of C
    std::filesystem::path schema_file;
    std::optional<std::filesystem::path> instructions_file;  // paths B, C
    bool allow_restructure = false;
};

struct RefinementConfig {
    bool resolve_continuations = true;
    bool propagate_metadata = true;
};

struct SemanticConfig {
    std::string task_prompt;
    net::BackendConfig backend;
};

struct EnrichmentConfig {
    std::optional<std::filesystem::path> gazetteer;
    std::vector<std::string> exports = {"tei", "csv", "jsonl"};
    json embedding = json::object({{"kind", "fixture"}, {"dimension", 64}});
    double link_threshold = 0.85;
    std::optional<SemanticConfig> semantic;
};

struct RagConfig {
    std::optional<std::filesystem::path> router_file;
    std::optional<net::BackendConfig> llm;
    rag::SearchOptions search;
    int max_words_per_chunk = 1000;
};

// Whole-pipeline configuration loaded from one JSON file. Relative paths
// resolve against the config file's directory; referenced files must exist
// at load time.
struct PipelineConfig {
    std::filesystem::path base_dir;
    std::string title;
    std::map<std::string, std::string> source_metadata;
    std::filesystem::path input_dir;
    std::filesystem::path output_dir;
    extract::RunMode mode = extract::RunMode::Partial;
    prep::PreprocessConfig preprocess;
    ExtractionConfig extraction;
    RefinementConfig refinement;
    EnrichmentConfig enrichment;
    RagConfig rag_config;
    int max_in_flight = 8;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const std::vector<std::string>& overrides = {});

// Parses an already-loaded config document (paths resolve against base_dir).
PipelineConfig parse_pipeline_config(const json& doc, const std::filesystem::path& base_dir);

// Applies "dotted.path=value" assignments onto the raw config document;
// values parse as JSON where possible and fall back to plain strings.
void apply_config_overrides(json& doc, const std::vector<std::string>& overrides);

}  // namespace folio::cli
