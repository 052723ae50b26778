#pragma once

#include <filesystem>

#include "posekit/image.hpp"

namespace posekit {

// PNG raster I/O. Grayscale intensities load into [0, 1] (color inputs are
// converted to luminance); masks are 8-bit, 0 = background, anything else =
// set, written as 0/255; depth is 16-bit grayscale, stored_value *
// scale_mm_per_unit = depth in mm, 0 = invalid (values saturate at the
// 16-bit range on save). All throw IoError on file problems and malformed
// PNGs.

inline constexpr double kDepthPngScale = 0.1;  // mm per stored unit

GrayImage load_gray_png(const std::filesystem::path& path);
void save_gray_png(const std::filesystem::path& path, const GrayImage& img);

BinaryMask load_mask_png(const std::filesystem::path& path);
void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

DepthMap load_depth_png(const std::filesystem::path& path,
                        double scale_mm_per_unit = kDepthPngScale);
void save_depth_png(const std::filesystem::path& path, const DepthMap& depth,
                    double scale_mm_per_unit = kDepthPngScale);

}  // namespace posekit
