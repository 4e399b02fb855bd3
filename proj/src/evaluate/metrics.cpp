// SPDX-License-Identifier: Apache-2.0
#include "folio/evaluate/metrics.hpp"

#include <algorithm>

#include "folio/util/text.hpp"

namespace folio::evaluate {

namespace util = folio::util;

std::string normalise_text(const std::string& text) {
    std::u32string cps = util::decode_utf8(text);
    std::u32string kept;
    kept.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (util::is_punctuation(cp)) continue;
        if (util::is_whitespace(cp)) {
            pending_space = !kept.empty();
            continue;
        }
        if (pending_space) {
            kept.push_back(U' ');
            pending_space = false;
        }
        kept.push_back(util::to_lower(cp));
    }
    return util::encode_utf8(kept);
}

namespace {

// Pages joined with one newline, ordered by page id.
std::pair<std::string, std::string> concatenate(std::vector<TranscriptPair>& pairs,
                                                bool normalised) {
    std::sort(pairs.begin(), pairs.end(),
              [](const TranscriptPair& a, const TranscriptPair& b) { return a.id < b.id; });
    std::string reference, hypothesis;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0) {
            reference += '\n';
            hypothesis += '\n';
        }
        reference += normalised ? normalise_text(pairs[i].reference) : pairs[i].reference;
        hypothesis += normalised ? normalise_text(pairs[i].hypothesis) : pairs[i].hypothesis;
    }
    return {reference, hypothesis};
}

json metric_to_json(const CorpusMetric& metric) {
    json out = json::object();
    out["rate"] = metric.rate;
    out["distance"] = metric.counts.distance;
    out["substitutions"] = metric.counts.substitutions;
    out["deletions"] = metric.counts.deletions;
    out["insertions"] = metric.counts.insertions;
    out["reference_units"] = metric.reference_units;
    return out;
}

CorpusMetric metric_from_json(const json& node) {
    CorpusMetric metric;
    metric.rate = node["rate"].get<double>();
    metric.counts.distance = node["distance"].get<std::uint64_t>();
    metric.counts.substitutions = node["substitutions"].get<std::uint64_t>();
    metric.counts.deletions = node["deletions"].get<std::uint64_t>();
    metric.counts.insertions = node["insertions"].get<std::uint64_t>();
    metric.reference_units = node["reference_units"].get<std::uint64_t>();
    return metric;
}

}  // namespace

CorpusMetric corpus_wer(std::vector<TranscriptPair> pairs, bool normalised) {
    if (pairs.empty()) throw Error("corpus metrics need at least one transcript pair");
    auto [reference, hypothesis] = concatenate(pairs, normalised);
    const std::vector<std::string> ref_tokens = util::split_tokens(reference);
    const std::vector<std::string> hyp_tokens = util::split_tokens(hypothesis);
    if (ref_tokens.empty()) throw Error("reference corpus is empty");

    CorpusMetric metric;
    metric.counts = edit_distance(ref_tokens, hyp_tokens);
    metric.reference_units = ref_tokens.size();
    metric.rate = static_cast<double>(metric.counts.distance) / metric.reference_units;
    return metric;
}

CorpusMetric corpus_cer(std::vector<TranscriptPair> pairs, bool normalised) {
    if (pairs.empty()) throw Error("corpus metrics need at least one transcript pair");
    auto [reference, hypothesis] = concatenate(pairs, normalised);
    const std::u32string ref_chars = util::decode_utf8(reference);
    const std::u32string hyp_chars = util::decode_utf8(hypothesis);
    if (ref_chars.empty()) throw Error("reference corpus is empty");

    CorpusMetric metric;
    metric.counts = edit_distance(ref_chars, hyp_chars);
    metric.reference_units = ref_chars.size();
    metric.rate = static_cast<double>(metric.counts.distance) / metric.reference_units;
    return metric;
}

MetricReport compute_metric_report(const std::vector<TranscriptPair>& pairs) {
    MetricReport report;
    report.wer_raw = corpus_wer(pairs, false);
    report.cer_raw = corpus_cer(pairs, false);
    report.wer_norm = corpus_wer(pairs, true);
    report.cer_norm = corpus_cer(pairs, true);
    return report;
}

json metric_report_to_json(const MetricReport& report) {
    json out = json::object();
    out["wer_raw"] = metric_to_json(report.wer_raw);
    out["cer_raw"] = metric_to_json(report.cer_raw);
    out["wer_norm"] = metric_to_json(report.wer_norm);
    out["cer_norm"] = metric_to_json(report.cer_norm);
    return out;
}

MetricReport metric_report_from_json(const json& node) {
    MetricReport report;
    report.wer_raw = metric_from_json(node["wer_raw"]);
    report.cer_raw = metric_from_json(node["cer_raw"]);
    report.wer_norm = metric_from_json(node["wer_norm"]);
    report.cer_norm = metric_from_json(node["cer_norm"]);
    return report;
}

}  // namespace folio::evaluate
