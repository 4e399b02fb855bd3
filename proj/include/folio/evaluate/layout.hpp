// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "folio/core/bbox.hpp"
#include "folio/core/element.hpp"

namespace folio::evaluate {

// Intersection over union of two boxes; 0 for disjoint boxes.
double compute_iou(const BBox& a, const BBox& b);

struct LayoutMatchConfig {
    double iou_threshold = 0.5;  // in (0, 1]
    bool require_label = true;
};

struct LayoutElement {
    BBox bbox;
    ElementCategory category = ElementCategory::Text;
};

struct LayoutScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (pred index, gold index)
};

// Greedy matching by IoU descending: a pair is accepted iff IoU >= threshold,
// labels agree (when required) and neither side is already matched.
LayoutScore layout_f1(const std::vector<LayoutElement>& predicted,
                      const std::vector<LayoutElement>& gold,
                      const LayoutMatchConfig& config = {});

// Corpus score: matching stays within each page pair, TP/FP/FN sum across pages.
LayoutScore layout_f1_corpus(
    const std::vector<std::pair<std::vector<LayoutElement>, std::vector<LayoutElement>>>& pages,
    const LayoutMatchConfig& config = {});

}  // namespace folio::evaluate
