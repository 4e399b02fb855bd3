// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace folio {

// Axis-aligned box in page-image pixel coordinates, end-exclusive:
// the box covers x in [x0, x1) and y in [y0, y1).
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    bool valid() const { return x0 >= 0 && y0 >= 0 && x0 < x1 && y0 < y1; }
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    std::int64_t area() const {
        return static_cast<std::int64_t>(width()) * static_cast<std::int64_t>(height());
    }

    bool operator==(const BBox&) const = default;
};

}  // namespace folio
