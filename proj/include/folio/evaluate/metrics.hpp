// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "folio/core/error.hpp"
#include "folio/core/json.hpp"

namespace folio::evaluate {

struct EditCounts {
    std::uint64_t distance = 0;
    std::uint64_t substitutions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t insertions = 0;

    bool operator==(const EditCounts&) const = default;
};

// Minimum-edit alignment, reference -> hypothesis, unit costs. When several
// minimal decompositions exist the diagonal move wins ties, so substitutions
// are preferred over delete+insert pairs and counts are deterministic.
// Two-row DP: O(len_a * len_b) time, O(len_b) memory.
template <typename Seq>
EditCounts edit_distance(const Seq& reference, const Seq& hypothesis) {
    const std::size_t n = reference.size();
    const std::size_t m = hypothesis.size();

    struct Cell {
        std::uint64_t dist, subs, dels, ins;
    };
    std::vector<Cell> prev(m + 1), curr(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, 0, 0, j};

    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = {i, 0, i, 0};
        for (std::size_t j = 1; j <= m; ++j) {
            const bool match = reference[i - 1] == hypothesis[j - 1];
            Cell best = prev[j - 1];
            if (!match) {
                best.dist += 1;
                best.subs += 1;
            }
            const Cell del{prev[j].dist + 1, prev[j].subs, prev[j].dels + 1, prev[j].ins};
            if (del.dist < best.dist) best = del;
            const Cell ins{curr[j - 1].dist + 1, curr[j - 1].subs, curr[j - 1].dels,
                           curr[j - 1].ins + 1};
            if (ins.dist < best.dist) best = ins;
            curr[j] = best;
        }
        std::swap(prev, curr);
    }
    return {prev[m].dist, prev[m].subs, prev[m].dels, prev[m].ins};
}

// Casefolds, strips punctuation (Unicode P* over ASCII, Latin-1 and General
// Punctuation), collapses whitespace runs to single spaces, trims.
std::string normalise_text(const std::string& text);

struct TranscriptPair {
    std::string id;
    std::string reference;
    std::string hypothesis;
};

struct CorpusMetric {
    double rate = 0.0;
    EditCounts counts;
    std::uint64_t reference_units = 0;  // tokens for WER, code points for CER
};

// Corpus-level rates over the concatenated page texts (joined with a single
// newline, pages ordered by id). Throws Error when the reference is empty.
CorpusMetric corpus_wer(std::vector<TranscriptPair> pairs, bool normalised);
CorpusMetric corpus_cer(std::vector<TranscriptPair> pairs, bool normalised);

struct MetricReport {
    CorpusMetric wer_raw;
    CorpusMetric cer_raw;
    CorpusMetric wer_norm;
    CorpusMetric cer_norm;
};

MetricReport compute_metric_report(const std::vector<TranscriptPair>& pairs);

json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const json& node);

}  // namespace folio::evaluate
