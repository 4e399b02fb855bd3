// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "folio/evaluate/layout.hpp"
#include "folio/evaluate/metrics.hpp"
#include "folio/evaluate/report.hpp"
#include "folio/util/text.hpp"

using namespace folio;
using evaluate::EditCounts;

namespace {

// Plain exhaustive recursion, no memoisation: the independent oracle for
// the DP implementation. Only usable for short sequences.
template <typename Seq>
std::uint64_t edit_distance_oracle(const Seq& a, std::size_t i, const Seq& b, std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    const std::uint64_t diag =
        edit_distance_oracle(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
    const std::uint64_t del = edit_distance_oracle(a, i + 1, b, j) + 1;
    const std::uint64_t ins = edit_distance_oracle(a, i, b, j + 1) + 1;
    return std::min({diag, del, ins});
}

std::vector<std::string> random_tokens(std::mt19937& rng, std::size_t max_len) {
    static const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::vector<std::string> out(len(rng));
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (auto& token : out) token = alphabet[pick(rng)];
    return out;
}

}  // namespace

TEST_CASE("edit_distance basics") {
    const std::vector<std::string> same = {"the", "cat", "sat"};
    CHECK(evaluate::edit_distance(same, same) == EditCounts{0, 0, 0, 0});

    const std::vector<std::string> hyp = {"the", "cat", "sits"};
    const EditCounts counts = evaluate::edit_distance(same, hyp);
    CHECK(counts.distance == 1);
    CHECK(counts.substitutions == 1);
    CHECK(counts.deletions == 0);
    CHECK(counts.insertions == 0);

    // reference -> hypothesis direction: insertions grow the hypothesis
    const std::vector<std::string> empty;
    const std::vector<std::string> two = {"a", "b"};
    CHECK(evaluate::edit_distance(empty, two) == EditCounts{2, 0, 0, 2});
    CHECK(evaluate::edit_distance(two, empty) == EditCounts{2, 0, 2, 0});
}

TEST_CASE("edit_distance prefers substitutions over delete+insert pairs") {
    const std::vector<std::string> ref = {"a", "b"};
    const std::vector<std::string> hyp = {"b", "a"};
    const EditCounts counts = evaluate::edit_distance(ref, hyp);
    CHECK(counts.distance == 2);
    CHECK(counts.substitutions == 2);
    CHECK(counts.deletions == 0);
    CHECK(counts.insertions == 0);
}

TEST_CASE("edit_distance equals the exhaustive-recursion oracle") {
    std::mt19937 rng(20260810);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_tokens(rng, 8);
        const auto b = random_tokens(rng, 8);
        const EditCounts counts = evaluate::edit_distance(a, b);
        CHECK(counts.distance == edit_distance_oracle(a, 0, b, 0));
        CHECK(counts.distance == counts.substitutions + counts.deletions + counts.insertions);
    }
}

TEST_CASE("edit_distance symmetry and triangle inequality") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_tokens(rng, 10);
        const auto b = random_tokens(rng, 10);
        const auto c = random_tokens(rng, 10);
        const auto dab = evaluate::edit_distance(a, b).distance;
        const auto dba = evaluate::edit_distance(b, a).distance;
        const auto dac = evaluate::edit_distance(a, c).distance;
        const auto dcb = evaluate::edit_distance(c, b).distance;
        CHECK(dab == dba);
        CHECK(dab <= dac + dcb);
    }
}

TEST_CASE("normalise_text lowers, strips punctuation, collapses whitespace") {
    CHECK(evaluate::normalise_text("Hello, World!") == "hello world");
    CHECK(evaluate::normalise_text("già — detto") == "già detto");
    CHECK(evaluate::normalise_text("...!?…") == "");
    CHECK(evaluate::normalise_text("  A  \t B\nC  ") == "a b c");
}

TEST_CASE("normalise_text is idempotent") {
    std::mt19937 rng(7);
    const std::string pool = "aB .,!àÈ\"'\t\n-";
    const std::u32string cps = util::decode_utf8(pool);
    for (int trial = 0; trial < 200; ++trial) {
        std::u32string text;
        std::uniform_int_distribution<std::size_t> len(0, 40);
        std::uniform_int_distribution<std::size_t> pick(0, cps.size() - 1);
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) text.push_back(cps[pick(rng)]);
        const std::string once = evaluate::normalise_text(util::encode_utf8(text));
        CHECK(evaluate::normalise_text(once) == once);
    }
}

TEST_CASE("corpus WER counts one error in twenty words as 0.05") {
    std::vector<evaluate::TranscriptPair> pairs = {
        {"p1", "uno due tre quattro cinque sei sette otto nove dieci",
         "uno due tre quattro cinque sei sette otto nove dieci"},
        {"p2", "undici dodici tredici quattordici quindici sedici diciassette diciotto "
               "diciannove venti",
         "undici dodici tredici quattordici quindici sedici diciassette diciotto "
         "diciannove trenta"},
    };
    const auto wer = evaluate::corpus_wer(pairs, false);
    CHECK(wer.reference_units == 20);
    CHECK(wer.rate == doctest::Approx(0.05));

    // identical corpora score zero
    pairs[1].hypothesis = pairs[1].reference;
    CHECK(evaluate::corpus_wer(pairs, false).rate == 0.0);
    CHECK(evaluate::corpus_cer(pairs, false).rate == 0.0);
}

TEST_CASE("corpus metrics are computed over the concatenation, not per page") {
    // A word moved across the page boundary: page-level comparison would
    // count two errors, corpus-level comparison at least aligns globally.
    std::vector<evaluate::TranscriptPair> pairs = {
        {"p1", "one two three", "one two"},
        {"p2", "four five", "three four five"},
    };
    const auto wer = evaluate::corpus_wer(pairs, false);
    // Concatenated with a newline separator, only the separator position
    // differs: "three" sits on the other side of the newline token split.
    CHECK(wer.counts.distance == 0);
}

TEST_CASE("corpus metric order is fixed by page id") {
    std::vector<evaluate::TranscriptPair> shuffled = {
        {"p2", "b", "b"},
        {"p1", "a", "x"},
    };
    std::vector<evaluate::TranscriptPair> ordered = {
        {"p1", "a", "x"},
        {"p2", "b", "b"},
    };
    CHECK(evaluate::corpus_wer(shuffled, false).rate ==
          evaluate::corpus_wer(ordered, false).rate);
}

TEST_CASE("corpus metrics reject an empty reference") {
    std::vector<evaluate::TranscriptPair> pairs = {{"p1", "", "x"}};
    CHECK_THROWS_AS(evaluate::corpus_wer(pairs, false), Error);
    CHECK_THROWS_AS(evaluate::corpus_wer({}, false), Error);
}

TEST_CASE("normalised condition ignores case and punctuation differences") {
    std::vector<evaluate::TranscriptPair> pairs = {
        {"p1", "Il Duca, entrò.", "il duca entrò"}};
    CHECK(evaluate::corpus_wer(pairs, true).rate == 0.0);
    CHECK(evaluate::corpus_wer(pairs, false).rate > 0.0);
}

TEST_CASE("metric report JSON round trip") {
    std::vector<evaluate::TranscriptPair> pairs = {
        {"p1", "uno due tre", "uno Due tre!"}};
    const evaluate::MetricReport report = evaluate::compute_metric_report(pairs);
    const evaluate::MetricReport loaded =
        evaluate::metric_report_from_json(evaluate::metric_report_to_json(report));
    CHECK(loaded.wer_raw.rate == report.wer_raw.rate);
    CHECK(loaded.cer_norm.counts.distance == report.cer_norm.counts.distance);
}

TEST_CASE("compute_iou") {
    const BBox a{0, 0, 10, 10};
    CHECK(evaluate::compute_iou(a, a) == 1.0);
    CHECK(evaluate::compute_iou(a, {20, 20, 30, 30}) == 0.0);
    CHECK(evaluate::compute_iou(a, {0, 5, 10, 15}) == doctest::Approx(1.0 / 3.0));
    // touching boxes do not intersect (end-exclusive coordinates)
    CHECK(evaluate::compute_iou(a, {10, 0, 20, 10}) == 0.0);
}

TEST_CASE("layout_f1 exact match and misses") {
    using evaluate::LayoutElement;
    const std::vector<LayoutElement> gold = {
        {{0, 0, 10, 10}, ElementCategory::Text},
        {{0, 20, 10, 30}, ElementCategory::Footnote},
    };
    const auto perfect = evaluate::layout_f1(gold, gold);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.true_positives == 2);

    const auto none = evaluate::layout_f1({}, gold);
    CHECK(none.f1 == 0.0);
    CHECK(none.false_negatives == 2);
}

TEST_CASE("layout_f1 greedy matching with a wrong label") {
    using evaluate::LayoutElement;
    // One prediction has the right box but the wrong label: TP=1, FP=1, FN=1.
    const std::vector<LayoutElement> gold = {
        {{0, 0, 10, 10}, ElementCategory::Text},
        {{0, 20, 10, 30}, ElementCategory::Footnote},
    };
    const std::vector<LayoutElement> pred = {
        {{0, 0, 10, 10}, ElementCategory::Text},
        {{0, 20, 10, 30}, ElementCategory::Text},
    };
    const auto score = evaluate::layout_f1(pred, gold);
    CHECK(score.true_positives == 1);
    CHECK(score.false_positives == 1);
    CHECK(score.false_negatives == 1);
    CHECK(score.f1 == doctest::Approx(0.5));
    CHECK(score.precision == doctest::Approx(0.5));
    CHECK(score.recall == doctest::Approx(0.5));
}

TEST_CASE("layout_f1 with threshold 1.0 accepts only identical boxes") {
    using evaluate::LayoutElement;
    const std::vector<LayoutElement> gold = {{{0, 0, 10, 10}, ElementCategory::Text}};
    const std::vector<LayoutElement> near = {{{0, 0, 10, 9}, ElementCategory::Text}};
    evaluate::LayoutMatchConfig config;
    config.iou_threshold = 1.0;
    CHECK(evaluate::layout_f1(near, gold, config).true_positives == 0);
    CHECK(evaluate::layout_f1(gold, gold, config).true_positives == 1);
}

TEST_CASE("layout_f1 greedy takes the best IoU pair first") {
    using evaluate::LayoutElement;
    // Two predictions overlap one gold box; the higher-IoU pair must win.
    const std::vector<LayoutElement> gold = {{{0, 0, 10, 10}, ElementCategory::Text}};
    const std::vector<LayoutElement> pred = {
        {{0, 0, 10, 8}, ElementCategory::Text},   // IoU 0.8
        {{0, 0, 10, 10}, ElementCategory::Text},  // IoU 1.0
    };
    const auto score = evaluate::layout_f1(pred, gold);
    REQUIRE(score.matches.size() == 1);
    CHECK(score.matches[0].first == 1);
}

TEST_CASE("effort projection reproduces the published arithmetic") {
    const auto effort = evaluate::effort_projection(135.0, 0.034, 0.011, 1688);
    CHECK(effort.base_hours == doctest::Approx(63.3).epsilon(0.01));
    CHECK(effort.sys_seconds_per_page == doctest::Approx(43.7).epsilon(0.01));
    CHECK(effort.sys_hours == doctest::Approx(20.5).epsilon(0.01));

    const auto flat = evaluate::effort_projection(135.0, 0.034, 0.034, 1688);
    CHECK(flat.sys_hours == doctest::Approx(flat.base_hours));

    CHECK(evaluate::effort_projection(135.0, 0.034, 0.0, 1688).sys_hours == 0.0);
    CHECK_THROWS_AS(evaluate::effort_projection(135.0, 0.0, 0.011, 1688), Error);
}

TEST_CASE("relative improvement matches the published percentages") {
    evaluate::MetricReport baseline, ours;
    baseline.wer_raw.rate = 0.142;
    baseline.cer_raw.rate = 0.031;
    baseline.wer_norm.rate = 0.034;
    baseline.cer_norm.rate = 0.014;
    ours.wer_raw.rate = 0.055;
    ours.cer_raw.rate = 0.013;
    ours.wer_norm.rate = 0.011;
    ours.cer_norm.rate = 0.007;

    const auto cmp = evaluate::compare_reports(baseline, ours);
    CHECK(100.0 * cmp.wer_norm == doctest::Approx(67.6).epsilon(0.001));
    CHECK(100.0 * cmp.cer_norm == doctest::Approx(50.0).epsilon(0.001));

    const auto equal = evaluate::compare_reports(baseline, baseline);
    CHECK(equal.wer_norm == 0.0);

    const std::string table = evaluate::comparison_table("baseline", "system", baseline, ours);
    CHECK(table.find("0.142") != std::string::npos);
    CHECK(table.find("0.011") != std::string::npos);
    CHECK(table.find("67.6") != std::string::npos);
    CHECK(table.find("50.0") != std::string::npos);
}
