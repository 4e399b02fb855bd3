// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "folio/core/error.hpp"

namespace folio::prep {

// 8-bit raster page image, row-major, interleaved channels (1 = gray,
// 3 = RGB). Treated as immutable by every operation: ops return new images.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;
    std::optional<int> dpi;

    static RasterImage make(int width, int height, int channels, std::uint8_t fill = 255) {
        if (width < 1 || height < 1 || (channels != 1 && channels != 3))
            throw Error("invalid image dimensions");
        RasterImage img;
        img.width = width;
        img.height = height;
        img.channels = channels;
        img.pixels.assign(static_cast<std::size_t>(width) * height * channels, fill);
        return img;
    }

    std::size_t expected_size() const {
        return static_cast<std::size_t>(width) * height * channels;
    }

    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    void check() const {
        if (width < 1 || height < 1 || (channels != 1 && channels != 3) ||
            pixels.size() != expected_size())
            throw Error("raster image buffer does not match its dimensions");
    }

    bool operator==(const RasterImage&) const = default;
};

}  // namespace folio::prep
