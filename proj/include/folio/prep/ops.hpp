// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "folio/core/bbox.hpp"
#include "folio/core/json.hpp"
#include "folio/prep/image.hpp"

namespace folio::prep {

// ITU-R BT.601 luminance, rounded to nearest. 1-channel input is returned
// unchanged.
RasterImage to_grayscale(const RasterImage& img);

// Exact lossless rotation by quarter_turns * 90 degrees clockwise;
// quarter_turns must be in {0, 1, 2, 3}.
RasterImage rotate90(const RasterImage& img, int quarter_turns);

// Estimates page skew in degrees over a [-10, +10] sweep at 0.1 degree
// steps by maximising the variance of the ink projection profile.
// Rotating by the negated result deskews the page. Flat profiles
// (blank/uniform images) yield 0.
double estimate_skew(const RasterImage& img);

// Bilinear rotation about the image centre, |angle_degrees| <= 45,
// white fill outside the source frame; dimensions are preserved.
RasterImage rotate(const RasterImage& img, double angle_degrees);

// Heuristic content detector: Otsu binarisation, then the tightest box
// around rows/columns whose ink density exceeds 2% of the page maximum,
// expanded by a 1% margin and clamped to the image. Degenerate (single
// intensity) images yield the full-image box.
BBox detect_page_region(const RasterImage& img);

// Pluggable detector interface; detect_page_region is the built-in default.
class PageDetector {
public:
    virtual ~PageDetector() = default;
    virtual BBox detect(const RasterImage& img) = 0;
};

class HeuristicPageDetector : public PageDetector {
public:
    BBox detect(const RasterImage& img) override { return detect_page_region(img); }
};

// Sauvola binarisation: black iff intensity <= m * (1 + k * (s/128 - 1))
// with m, s the local mean / standard deviation over a window x window
// neighbourhood clipped to the image. Output holds only {0, 255}.
RasterImage adaptive_threshold(const RasterImage& img, int window = 31, double k = 0.2);

// Median filter over the (2*radius+1)^2 neighbourhood, edge-clamped.
RasterImage median_denoise(const RasterImage& img, int radius = 1);

RasterImage crop(const RasterImage& img, const BBox& box);

// One configured enhancement step.
struct PreprocessStep {
    enum class Op { Rotate90, Deskew, DetectPage, Grayscale, AdaptiveThreshold, MedianDenoise };
    Op op = Op::Grayscale;
    int turns = 0;        // Rotate90
    int window = 31;      // AdaptiveThreshold
    double k = 0.2;       // AdaptiveThreshold
    int radius = 1;       // MedianDenoise
};

struct PreprocessConfig {
    std::vector<PreprocessStep> steps;
    std::optional<int> target_dpi;

    // Rejects unknown op names, unknown parameters and out-of-range values.
    static PreprocessConfig from_json(const json& node);
    json to_json() const;
};

// Applies the configured steps in order; the empty chain is the identity.
// A step failure is reported with its index and op name.
RasterImage run_chain(const PreprocessConfig& config, const RasterImage& img);

}  // namespace folio::prep
