// SPDX-License-Identifier: Apache-2.0
#include "folio/evaluate/report.hpp"

#include <cstdio>

namespace folio::evaluate {

EffortProjection effort_projection(double base_seconds_per_page, double base_wer,
                                   double sys_wer, int pages) {
    if (base_wer <= 0.0) throw Error("effort projection needs a positive baseline WER");
    EffortProjection out;
    out.base_hours = base_seconds_per_page * pages / 3600.0;
    out.sys_seconds_per_page = base_seconds_per_page * sys_wer / base_wer;
    out.sys_hours = out.sys_seconds_per_page * pages / 3600.0;
    return out;
}

double total_hours(double machine_seconds_per_page, double correction_seconds_per_page,
                   int pages) {
    return (machine_seconds_per_page + correction_seconds_per_page) * pages / 3600.0;
}

namespace {

double relative_improvement(double a, double b) { return a == 0.0 ? 0.0 : (a - b) / a; }

}  // namespace

MetricComparison compare_reports(const MetricReport& a, const MetricReport& b) {
    MetricComparison out;
    out.wer_raw = relative_improvement(a.wer_raw.rate, b.wer_raw.rate);
    out.cer_raw = relative_improvement(a.cer_raw.rate, b.cer_raw.rate);
    out.wer_norm = relative_improvement(a.wer_norm.rate, b.wer_norm.rate);
    out.cer_norm = relative_improvement(a.cer_norm.rate, b.cer_norm.rate);
    return out;
}

json comparison_to_json(const std::string& label_a, const std::string& label_b,
                        const MetricReport& a, const MetricReport& b) {
    const MetricComparison cmp = compare_reports(a, b);
    json out = json::object();
    out["systems"] = json::array({label_a, label_b});
    out["metrics"] = json::object();
    out["metrics"][label_a] = metric_report_to_json(a);
    out["metrics"][label_b] = metric_report_to_json(b);
    json improvement = json::object();
    improvement["wer_raw"] = cmp.wer_raw;
    improvement["cer_raw"] = cmp.cer_raw;
    improvement["wer_norm"] = cmp.wer_norm;
    improvement["cer_norm"] = cmp.cer_norm;
    out["relative_improvement"] = improvement;
    return out;
}

std::string comparison_table(const std::string& label_a, const std::string& label_b,
                             const MetricReport& a, const MetricReport& b) {
    const MetricComparison cmp = compare_reports(a, b);
    char line[256];
    std::string out;
    std::snprintf(line, sizeof(line), "%-12s %10s %10s   %10s %10s\n", "", label_a.c_str(), "",
                  label_b.c_str(), "");
    out += line;
    std::snprintf(line, sizeof(line), "%-12s %10s %10s   %10s %10s\n", "Text", "WER", "CER",
                  "WER", "CER");
    out += line;
    std::snprintf(line, sizeof(line), "%-12s %10.3f %10.3f   %10.3f %10.3f\n", "Raw",
                  a.wer_raw.rate, a.cer_raw.rate, b.wer_raw.rate, b.cer_raw.rate);
    out += line;
    std::snprintf(line, sizeof(line), "%-12s %10.3f %10.3f   %10.3f %10.3f\n", "Normalised",
                  a.wer_norm.rate, a.cer_norm.rate, b.wer_norm.rate, b.cer_norm.rate);
    out += line;
    std::snprintf(line, sizeof(line),
                  "Relative improvement: WER %.1f%% / CER %.1f%% (normalised), "
                  "WER %.1f%% / CER %.1f%% (raw)\n",
                  100.0 * cmp.wer_norm, 100.0 * cmp.cer_norm, 100.0 * cmp.wer_raw,
                  100.0 * cmp.cer_raw);
    out += line;
    return out;
}

}  // namespace folio::evaluate
