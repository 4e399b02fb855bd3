// SPDX-License-Identifier: Apache-2.0
#include "folio/evaluate/layout.hpp"

#include <algorithm>

#include "folio/core/error.hpp"

namespace folio::evaluate {

double compute_iou(const BBox& a, const BBox& b) {
    const std::int64_t ix = std::max<std::int64_t>(
        0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
    const std::int64_t iy = std::max<std::int64_t>(
        0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
    const std::int64_t intersection = ix * iy;
    const std::int64_t union_area = a.area() + b.area() - intersection;
    if (union_area <= 0) return 0.0;
    return static_cast<double>(intersection) / static_cast<double>(union_area);
}

LayoutScore layout_f1(const std::vector<LayoutElement>& predicted,
                      const std::vector<LayoutElement>& gold,
                      const LayoutMatchConfig& config) {
    if (config.iou_threshold <= 0.0 || config.iou_threshold > 1.0)
        throw Error("layout IoU threshold must be in (0, 1]");

    struct Candidate {
        double iou;
        std::size_t pred, gold;
    };
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (std::size_t g = 0; g < gold.size(); ++g) {
            const double iou = compute_iou(predicted[p].bbox, gold[g].bbox);
            if (iou >= config.iou_threshold) candidates.push_back({iou, p, g});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         if (a.iou != b.iou) return a.iou > b.iou;
                         if (a.pred != b.pred) return a.pred < b.pred;
                         return a.gold < b.gold;
                     });

    std::vector<bool> pred_used(predicted.size(), false), gold_used(gold.size(), false);
    LayoutScore score;
    for (const Candidate& c : candidates) {
        if (pred_used[c.pred] || gold_used[c.gold]) continue;
        if (config.require_label && predicted[c.pred].category != gold[c.gold].category) continue;
        pred_used[c.pred] = true;
        gold_used[c.gold] = true;
        score.matches.emplace_back(c.pred, c.gold);
    }
    score.true_positives = score.matches.size();
    score.false_positives = predicted.size() - score.true_positives;
    score.false_negatives = gold.size() - score.true_positives;

    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    score.precision = ratio(score.true_positives, score.true_positives + score.false_positives);
    score.recall = ratio(score.true_positives, score.true_positives + score.false_negatives);
    score.f1 = (score.precision + score.recall) == 0.0
                   ? 0.0
                   : 2.0 * score.precision * score.recall / (score.precision + score.recall);
    return score;
}

LayoutScore layout_f1_corpus(
    const std::vector<std::pair<std::vector<LayoutElement>, std::vector<LayoutElement>>>& pages,
    const LayoutMatchConfig& config) {
    LayoutScore total;
    for (const auto& [predicted, gold] : pages) {
        const LayoutScore page = layout_f1(predicted, gold, config);
        total.true_positives += page.true_positives;
        total.false_positives += page.false_positives;
        total.false_negatives += page.false_negatives;
    }
    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    total.precision = ratio(total.true_positives, total.true_positives + total.false_positives);
    total.recall = ratio(total.true_positives, total.true_positives + total.false_negatives);
    total.f1 = (total.precision + total.recall) == 0.0
                   ? 0.0
                   : 2.0 * total.precision * total.recall / (total.precision + total.recall);
    return total;
}

}  // namespace folio::evaluate
