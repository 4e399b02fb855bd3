// SPDX-License-Identifier: Apache-2.0
#include "folio/prep/image_io.hpp"

#include "folio/core/error.hpp"

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-enum-enum-conversion"
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#pragma GCC diagnostic pop

namespace folio::prep {

namespace {

cv::Mat to_mat(const RasterImage& img) {
    img.check();
    cv::Mat mat(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            if (img.channels == 1) {
                row[x] = img.at(x, y);
            } else {
                // RasterImage is RGB; OpenCV expects BGR.
                row[x * 3 + 0] = img.at(x, y, 2);
                row[x * 3 + 1] = img.at(x, y, 1);
                row[x * 3 + 2] = img.at(x, y, 0);
            }
        }
    }
    return mat;
}

RasterImage from_mat(const cv::Mat& mat) {
    RasterImage img = RasterImage::make(mat.cols, mat.rows, mat.channels() == 1 ? 1 : 3);
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            if (mat.channels() == 1) {
                img.at(x, y) = row[x];
            } else {
                img.at(x, y, 0) = row[x * 3 + 2];
                img.at(x, y, 1) = row[x * 3 + 1];
                img.at(x, y, 2) = row[x * 3 + 0];
            }
        }
    }
    return img;
}

}  // namespace

RasterImage read_image(const std::filesystem::path& path) {
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty()) throw IoError("cannot read image " + path.string());
    if (mat.depth() != CV_8U) {
        cv::Mat converted;
        const double scale = mat.depth() == CV_16U ? 1.0 / 257.0 : 1.0;
        mat.convertTo(converted, CV_8U, scale);
        mat = converted;
    }
    if (mat.channels() == 4) {
        cv::Mat bgr(mat.rows, mat.cols, CV_8UC3);
        for (int y = 0; y < mat.rows; ++y) {
            const std::uint8_t* src = mat.ptr<std::uint8_t>(y);
            std::uint8_t* dst = bgr.ptr<std::uint8_t>(y);
            for (int x = 0; x < mat.cols; ++x) {
                dst[x * 3 + 0] = src[x * 4 + 0];
                dst[x * 3 + 1] = src[x * 4 + 1];
                dst[x * 3 + 2] = src[x * 4 + 2];
            }
        }
        mat = bgr;
    } else if (mat.channels() != 1 && mat.channels() != 3) {
        throw IoError("unsupported channel count in " + path.string());
    }
    return from_mat(mat);
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
    if (!cv::imwrite(path.string(), to_mat(img)))
        throw IoError("cannot write image " + path.string());
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    std::vector<std::uint8_t> buffer;
    if (!cv::imencode(".png", to_mat(img), buffer)) throw IoError("PNG encoding failed");
    return buffer;
}

}  // namespace folio::prep
