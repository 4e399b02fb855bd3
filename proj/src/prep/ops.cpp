// SPDX-License-Identifier: Apache-2.0
#include "folio/prep/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace folio::prep {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

int clamp_int(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

// Otsu's threshold over a 256-bin histogram; returns -1 when the image has
// a single intensity (no split exists).
int otsu_threshold(const RasterImage& img) {
    std::array<std::int64_t, 256> hist{};
    for (std::uint8_t v : img.pixels) ++hist[v];

    const std::int64_t total = static_cast<std::int64_t>(img.pixels.size());
    std::int64_t sum_all = 0;
    int distinct = 0;
    for (int v = 0; v < 256; ++v) {
        sum_all += static_cast<std::int64_t>(v) * hist[v];
        if (hist[v] > 0) ++distinct;
    }
    if (distinct <= 1) return -1;

    std::int64_t weight_bg = 0, sum_bg = 0;
    double best_between = -1.0;
    int best_threshold = 0;
    for (int t = 0; t < 256; ++t) {
        weight_bg += hist[t];
        if (weight_bg == 0) continue;
        const std::int64_t weight_fg = total - weight_bg;
        if (weight_fg == 0) break;
        sum_bg += static_cast<std::int64_t>(t) * hist[t];
        const double mean_bg = static_cast<double>(sum_bg) / weight_bg;
        const double mean_fg = static_cast<double>(sum_all - sum_bg) / weight_fg;
        const double between = static_cast<double>(weight_bg) * weight_fg *
                               (mean_bg - mean_fg) * (mean_bg - mean_fg);
        if (between > best_between) {
            best_between = between;
            best_threshold = t;
        }
    }
    return best_threshold;
}

void require_gray(const RasterImage& img, const char* op) {
    img.check();
    if (img.channels != 1) throw Error(std::string(op) + " requires a 1-channel image");
}

}  // namespace

RasterImage to_grayscale(const RasterImage& img) {
    img.check();
    if (img.channels == 1) return img;
    if (img.channels != 3) throw Error("to_grayscale: unsupported channel count");
    RasterImage out = RasterImage::make(img.width, img.height, 1);
    out.dpi = img.dpi;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.pixels[i * 3];
        const double g = img.pixels[i * 3 + 1];
        const double b = img.pixels[i * 3 + 2];
        out.pixels[i] = static_cast<std::uint8_t>(std::llround(0.299 * r + 0.587 * g + 0.114 * b));
    }
    return out;
}

RasterImage rotate90(const RasterImage& img, int quarter_turns) {
    img.check();
    if (quarter_turns < 0 || quarter_turns > 3)
        throw Error("rotate90: quarter_turns must be in {0, 1, 2, 3}");
    RasterImage current = img;
    for (int t = 0; t < quarter_turns; ++t) {
        // Source pixel (x, y) lands at (h - 1 - y, x).
        RasterImage next = RasterImage::make(current.height, current.width, current.channels);
        next.dpi = current.dpi;
        for (int y = 0; y < current.height; ++y)
            for (int x = 0; x < current.width; ++x)
                for (int c = 0; c < current.channels; ++c)
                    next.at(current.height - 1 - y, x, c) = current.at(x, y, c);
        current = std::move(next);
    }
    return current;
}

double estimate_skew(const RasterImage& img) {
    require_gray(img, "estimate_skew");

    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    const int half_bins =
        static_cast<int>(std::ceil(img.height / 2.0 + img.width / 2.0 * std::tan(10.0 * kDegToRad))) + 2;
    const int bin_count = 2 * half_bins + 1;
    std::vector<double> bins(static_cast<std::size_t>(bin_count));

    // Candidates ordered by |angle| so flat profiles resolve to 0.
    std::vector<double> candidates;
    candidates.push_back(0.0);
    for (int step = 1; step <= 100; ++step) {
        candidates.push_back(step * 0.1);
        candidates.push_back(-step * 0.1);
    }

    double best_angle = 0.0;
    double best_variance = -1.0;
    for (double angle : candidates) {
        const double slope = std::tan(angle * kDegToRad);
        std::fill(bins.begin(), bins.end(), 0.0);
        for (int y = 0; y < img.height; ++y) {
            const double yc = y - cy;
            for (int x = 0; x < img.width; ++x) {
                const double ink = 255.0 - img.at(x, y);
                if (ink == 0.0) continue;
                const int bin = static_cast<int>(std::llround(yc - slope * (x - cx))) + half_bins;
                if (bin >= 0 && bin < bin_count) bins[static_cast<std::size_t>(bin)] += ink;
            }
        }
        double mean = 0.0;
        for (double b : bins) mean += b;
        mean /= bin_count;
        double variance = 0.0;
        for (double b : bins) variance += (b - mean) * (b - mean);
        variance /= bin_count;
        if (variance > best_variance + 1e-9) {
            best_variance = variance;
            best_angle = angle;
        }
    }
    return best_variance <= 1e-12 ? 0.0 : best_angle;
}

RasterImage rotate(const RasterImage& img, double angle_degrees) {
    img.check();
    if (std::abs(angle_degrees) > 45.0) throw Error("rotate: |angle| must be <= 45 degrees");
    const double theta = angle_degrees * kDegToRad;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;

    RasterImage out = RasterImage::make(img.width, img.height, img.channels, 255);
    out.dpi = img.dpi;
    for (int yd = 0; yd < img.height; ++yd) {
        for (int xd = 0; xd < img.width; ++xd) {
            const double xdc = xd - cx;
            const double ydc = yd - cy;
            const double xs = cos_t * xdc + sin_t * ydc + cx;
            const double ys = -sin_t * xdc + cos_t * ydc + cy;
            const int x0 = static_cast<int>(std::floor(xs));
            const int y0 = static_cast<int>(std::floor(ys));
            const double fx = xs - x0;
            const double fy = ys - y0;
            for (int c = 0; c < img.channels; ++c) {
                const auto sample = [&](int x, int y) -> double {
                    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return 255.0;
                    return img.at(x, y, c);
                };
                const double top = sample(x0, y0) * (1 - fx) + sample(x0 + 1, y0) * fx;
                const double bottom = sample(x0, y0 + 1) * (1 - fx) + sample(x0 + 1, y0 + 1) * fx;
                const double value = top * (1 - fy) + bottom * fy;
                out.at(xd, yd, c) = static_cast<std::uint8_t>(
                    clamp_int(static_cast<int>(std::llround(value)), 0, 255));
            }
        }
    }
    return out;
}

BBox detect_page_region(const RasterImage& img) {
    require_gray(img, "detect_page_region");
    const BBox full{0, 0, img.width, img.height};

    const int threshold = otsu_threshold(img);
    if (threshold < 0) return full;  // blank or uniform page

    std::vector<std::int64_t> row_ink(static_cast<std::size_t>(img.height), 0);
    std::vector<std::int64_t> col_ink(static_cast<std::size_t>(img.width), 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y) <= threshold) {
                ++row_ink[static_cast<std::size_t>(y)];
                ++col_ink[static_cast<std::size_t>(x)];
            }

    const std::int64_t row_max = *std::max_element(row_ink.begin(), row_ink.end());
    const std::int64_t col_max = *std::max_element(col_ink.begin(), col_ink.end());
    if (row_max == 0) return full;

    int top = -1, bottom = -1, left = -1, right = -1;
    for (int y = 0; y < img.height; ++y)
        if (static_cast<double>(row_ink[static_cast<std::size_t>(y)]) > 0.02 * row_max) {
            if (top < 0) top = y;
            bottom = y;
        }
    for (int x = 0; x < img.width; ++x)
        if (static_cast<double>(col_ink[static_cast<std::size_t>(x)]) > 0.02 * col_max) {
            if (left < 0) left = x;
            right = x;
        }
    if (top < 0 || left < 0) return full;

    const int margin_x = std::max(1, static_cast<int>(std::llround(0.01 * img.width)));
    const int margin_y = std::max(1, static_cast<int>(std::llround(0.01 * img.height)));
    BBox box{clamp_int(left - margin_x, 0, img.width - 1),
             clamp_int(top - margin_y, 0, img.height - 1),
             clamp_int(right + 1 + margin_x, 1, img.width),
             clamp_int(bottom + 1 + margin_y, 1, img.height)};
    return box;
}

RasterImage adaptive_threshold(const RasterImage& img, int window, double k) {
    require_gray(img, "adaptive_threshold");
    if (window < 3 || window % 2 == 0) throw Error("adaptive_threshold: window must be odd, >= 3");
    if (k <= 0.0 || k >= 1.0) throw Error("adaptive_threshold: k must be in (0, 1)");

    const int w = img.width, h = img.height;
    // Integral images over intensity and squared intensity, (w+1) x (h+1).
    std::vector<std::uint64_t> sum(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    std::vector<std::uint64_t> sum_sq(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * (w + 1) + x; };
    for (int y = 1; y <= h; ++y) {
        std::uint64_t row = 0, row_sq = 0;
        for (int x = 1; x <= w; ++x) {
            const std::uint64_t v = img.at(x - 1, y - 1);
            row += v;
            row_sq += v * v;
            sum[idx(x, y)] = sum[idx(x, y - 1)] + row;
            sum_sq[idx(x, y)] = sum_sq[idx(x, y - 1)] + row_sq;
        }
    }

    const int half = window / 2;
    RasterImage out = RasterImage::make(w, h, 1);
    out.dpi = img.dpi;
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - half);
        const int y1 = std::min(h - 1, y + half);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - half);
            const int x1 = std::min(w - 1, x + half);
            const std::int64_t count = static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
            const std::uint64_t s1 = sum[idx(x1 + 1, y1 + 1)] - sum[idx(x0, y1 + 1)] -
                                     sum[idx(x1 + 1, y0)] + sum[idx(x0, y0)];
            const std::uint64_t s2 = sum_sq[idx(x1 + 1, y1 + 1)] - sum_sq[idx(x0, y1 + 1)] -
                                     sum_sq[idx(x1 + 1, y0)] + sum_sq[idx(x0, y0)];
            const double mean = static_cast<double>(s1) / count;
            const double variance = static_cast<double>(s2) / count - mean * mean;
            const double stddev = std::sqrt(std::max(0.0, variance));
            const double threshold = mean * (1.0 + k * (stddev / 128.0 - 1.0));
            out.at(x, y) = img.at(x, y) <= threshold ? 0 : 255;
        }
    }
    return out;
}

RasterImage median_denoise(const RasterImage& img, int radius) {
    img.check();
    if (radius < 1) throw Error("median_denoise: radius must be >= 1");
    RasterImage out = img;
    std::vector<std::uint8_t> window;
    window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                window.clear();
                for (int dy = -radius; dy <= radius; ++dy)
                    for (int dx = -radius; dx <= radius; ++dx)
                        window.push_back(img.at(clamp_int(x + dx, 0, img.width - 1),
                                                clamp_int(y + dy, 0, img.height - 1), c));
                auto mid = window.begin() + window.size() / 2;
                std::nth_element(window.begin(), mid, window.end());
                out.at(x, y, c) = *mid;
            }
        }
    }
    return out;
}

RasterImage crop(const RasterImage& img, const BBox& box) {
    img.check();
    if (!box.valid() || box.x1 > img.width || box.y1 > img.height)
        throw Error("crop: box outside image bounds");
    RasterImage out = RasterImage::make(box.width(), box.height(), img.channels);
    out.dpi = img.dpi;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = img.at(box.x0 + x, box.y0 + y, c);
    return out;
}

namespace {

PreprocessStep::Op op_from_string(const std::string& name) {
    if (name == "rotate90") return PreprocessStep::Op::Rotate90;
    if (name == "deskew") return PreprocessStep::Op::Deskew;
    if (name == "detect_page") return PreprocessStep::Op::DetectPage;
    if (name == "grayscale") return PreprocessStep::Op::Grayscale;
    if (name == "adaptive_threshold") return PreprocessStep::Op::AdaptiveThreshold;
    if (name == "median_denoise") return PreprocessStep::Op::MedianDenoise;
    throw ConfigError("unknown preprocess op '" + name + "'");
}

std::string op_name(PreprocessStep::Op op) {
    switch (op) {
        case PreprocessStep::Op::Rotate90: return "rotate90";
        case PreprocessStep::Op::Deskew: return "deskew";
        case PreprocessStep::Op::DetectPage: return "detect_page";
        case PreprocessStep::Op::Grayscale: return "grayscale";
        case PreprocessStep::Op::AdaptiveThreshold: return "adaptive_threshold";
        case PreprocessStep::Op::MedianDenoise: return "median_denoise";
    }
    return "?";
}

void check_params(const json& params, std::initializer_list<const char*> allowed,
                  const std::string& op) {
    for (const auto& [key, value] : params.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError("unknown parameter '" + key + "' for op '" + op + "'");
    }
}

}  // namespace

PreprocessConfig PreprocessConfig::from_json(const json& node) {
    if (!node.is_object()) throw ConfigError("preprocess config must be an object");
    for (const auto& [key, value] : node.items()) {
        (void)value;
        if (key != "steps" && key != "target_dpi")
            throw ConfigError("unknown preprocess config key '" + key + "'");
    }
    PreprocessConfig config;
    if (node.contains("target_dpi")) {
        const int dpi = node["target_dpi"].get<int>();
        if (dpi < 1) throw ConfigError("target_dpi must be positive");
        config.target_dpi = dpi;
    }
    if (!node.contains("steps")) return config;
    if (!node["steps"].is_array()) throw ConfigError("preprocess 'steps' must be an array");

    for (const json& entry : node["steps"]) {
        if (!entry.is_object() || !entry.contains("op"))
            throw ConfigError("each preprocess step needs an 'op'");
        PreprocessStep step;
        const std::string name = entry["op"].get<std::string>();
        step.op = op_from_string(name);
        const json params = entry.contains("params") ? entry["params"] : json::object();
        switch (step.op) {
            case PreprocessStep::Op::Rotate90:
                check_params(params, {"turns"}, name);
                if (!params.contains("turns")) throw ConfigError("rotate90 needs 'turns'");
                step.turns = params["turns"].get<int>();
                if (step.turns < 0 || step.turns > 3)
                    throw ConfigError("rotate90 turns must be in {0, 1, 2, 3}");
                break;
            case PreprocessStep::Op::AdaptiveThreshold:
                check_params(params, {"window", "k"}, name);
                if (params.contains("window")) step.window = params["window"].get<int>();
                if (params.contains("k")) step.k = params["k"].get<double>();
                if (step.window < 3 || step.window % 2 == 0)
                    throw ConfigError("adaptive_threshold window must be odd, >= 3");
                if (step.k <= 0.0 || step.k >= 1.0)
                    throw ConfigError("adaptive_threshold k must be in (0, 1)");
                break;
            case PreprocessStep::Op::MedianDenoise:
                check_params(params, {"radius"}, name);
                if (params.contains("radius")) step.radius = params["radius"].get<int>();
                if (step.radius < 1) throw ConfigError("median_denoise radius must be >= 1");
                break;
            default:
                check_params(params, {}, name);
                break;
        }
        config.steps.push_back(step);
    }
    return config;
}

json PreprocessConfig::to_json() const {
    json out = json::object();
    json steps = json::array();
    for (const PreprocessStep& step : this->steps) {
        json entry = json::object();
        entry["op"] = op_name(step.op);
        json params = json::object();
        switch (step.op) {
            case PreprocessStep::Op::Rotate90: params["turns"] = step.turns; break;
            case PreprocessStep::Op::AdaptiveThreshold:
                params["window"] = step.window;
                params["k"] = step.k;
                break;
            case PreprocessStep::Op::MedianDenoise: params["radius"] = step.radius; break;
            default: break;
        }
        if (!params.empty()) entry["params"] = params;
        steps.push_back(entry);
    }
    out["steps"] = steps;
    if (target_dpi) out["target_dpi"] = *target_dpi;
    return out;
}

RasterImage run_chain(const PreprocessConfig& config, const RasterImage& img) {
    img.check();
    RasterImage current = img;
    for (std::size_t i = 0; i < config.steps.size(); ++i) {
        const PreprocessStep& step = config.steps[i];
        try {
            switch (step.op) {
                case PreprocessStep::Op::Rotate90:
                    current = rotate90(current, step.turns);
                    break;
                case PreprocessStep::Op::Deskew: {
                    // Estimation runs on a grayscale view; the rotation is
                    // applied to the actual image so colour inputs survive.
                    const double angle = estimate_skew(
                        current.channels == 1 ? current : to_grayscale(current));
                    current = rotate(current, -angle);
                    break;
                }
                case PreprocessStep::Op::DetectPage: {
                    const BBox region = detect_page_region(
                        current.channels == 1 ? current : to_grayscale(current));
                    current = crop(current, region);
                    break;
                }
                case PreprocessStep::Op::Grayscale:
                    current = to_grayscale(current);
                    break;
                case PreprocessStep::Op::AdaptiveThreshold:
                    current = adaptive_threshold(current, step.window, step.k);
                    break;
                case PreprocessStep::Op::MedianDenoise:
                    current = median_denoise(current, step.radius);
                    break;
            }
        } catch (const Error& e) {
            throw Error("preprocess step " + std::to_string(i) + " (" + op_name(step.op) +
                        "): " + e.what());
        }
    }
    if (config.target_dpi) current.dpi = config.target_dpi;
    return current;
}

}  // namespace folio::prep
