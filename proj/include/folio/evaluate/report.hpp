// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "folio/core/json.hpp"
#include "folio/evaluate/metrics.hpp"

namespace folio::evaluate {

// Linear correction-effort model: per-page correction time scales with WER.
struct EffortProjection {
    double base_hours = 0.0;
    double sys_seconds_per_page = 0.0;
    double sys_hours = 0.0;
};

// Throws Error when base_wer is zero.
EffortProjection effort_projection(double base_seconds_per_page, double base_wer,
                                   double sys_wer, int pages);

// Machine plus correction time for a whole corpus, in hours.
double total_hours(double machine_seconds_per_page, double correction_seconds_per_page,
                   int pages);

// Relative improvement of b over a, (a - b) / a, per metric and condition.
struct MetricComparison {
    double wer_raw = 0.0;
    double cer_raw = 0.0;
    double wer_norm = 0.0;
    double cer_norm = 0.0;
};

MetricComparison compare_reports(const MetricReport& a, const MetricReport& b);

json comparison_to_json(const std::string& label_a, const std::string& label_b,
                        const MetricReport& a, const MetricReport& b);

// Aligned text table: raw/normalised rows, WER/CER columns per system,
// followed by the relative improvements.
std::string comparison_table(const std::string& label_a, const std::string& label_b,
                             const MetricReport& a, const MetricReport& b);

}  // namespace folio::evaluate
