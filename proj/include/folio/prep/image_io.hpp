// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "folio/prep/image.hpp"

namespace folio::prep {

// Reads PNG, JPEG or TIFF. Grayscale sources load as 1 channel, colour as
// 3-channel RGB. Throws IoError on unreadable files.
RasterImage read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RasterImage& img);

// In-memory PNG bytes, used to embed page images in backend requests.
std::vector<std::uint8_t> encode_png(const RasterImage& img);

}  // namespace folio::prep
