// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "folio/cli/config.hpp"

namespace folio::cli {

// Distinct exit codes per failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitBackend = 4;
inline constexpr int kExitValidation = 5;

// Stage runners; each reads its predecessor's artifact under
// config.output_dir and writes its own. They throw typed errors which
// map_exit_code translates for the CLI.
void run_preprocess(const PipelineConfig& config);
void run_extract(const PipelineConfig& config);
void run_refine(const PipelineConfig& config);
void run_enrich(const PipelineConfig& config);
void run_ingest(const PipelineConfig& config);
void run_all(const PipelineConfig& config);

struct EvalArgs {
    std::filesystem::path reference_dir;       // per-page .txt ground truth
    std::filesystem::path hypothesis_dir;      // per-page .txt system output
    std::optional<std::filesystem::path> layout_gold_dir;  // per-page element JSON
    std::optional<std::filesystem::path> layout_pred_dir;
    std::filesystem::path output_dir;
    double iou_threshold = 0.5;
};

void run_eval(const EvalArgs& args);

struct ReportArgs {
    std::filesystem::path report_a;  // report.json of the baseline
    std::filesystem::path report_b;  // report.json of the compared system
    std::string label_a = "baseline";
    std::string label_b = "system";
    std::filesystem::path output_dir;
    // Optional correction-effort projection from the normalised WERs.
    std::optional<double> correction_seconds_per_page;  // measured on system A
    std::optional<int> pages;
    std::optional<double> machine_seconds_a;
    std::optional<double> machine_seconds_b;
};

void run_report(const ReportArgs& args);

// One-shot when `query` is set, otherwise a line-oriented loop over `in`.
void run_query(const PipelineConfig& config, const std::optional<std::string>& query,
               std::istream& in, std::ostream& out);

int map_exit_code(const std::exception& error);

}  // namespace folio::cli
