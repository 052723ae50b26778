#pragma once

#include <filesystem>

#include "posekit/camera.hpp"
#include "posekit/image.hpp"

namespace posekit {

// Classical ZNCC block matcher over rectified pairs. Disparity is
// left-image referenced and positive: left pixel (x,y) matches right pixel
// (x-d, y). Deliberately a desk-scale stand-in for learned disparity;
// external disparity maps come in through load_disparity_pfm instead.
struct MatcherParams {
  int max_disparity = 128;        // search range [0, max_disparity], px
  int window = 9;                 // odd square window edge, px
  double lr_tolerance = 1.0;      // left-right agreement bound, px
  double uniqueness_ratio = 0.95; // keep only if best_cost <= ratio * second_best
};

enum class StereoView { kLeft, kRight };

// Winner-take-all ZNCC matching with parabolic subpixel refinement, from one
// view's perspective, without the left-right cross-check. Bit-deterministic.
DisparityMap match_block_one_view(const GrayImage& left, const GrayImage& right,
                                  const MatcherParams& params, StereoView view);

// Full matcher: both directions plus left-right consistency and uniqueness
// filtering. Output is referenced to the left image.
DisparityMap match_block(const GrayImage& left, const GrayImage& right,
                         const MatcherParams& params);

// Disparities below this produce out-of-range depths and are invalidated.
inline constexpr double kDefaultMinDisparityFloor = 0.5;  // px

// Z = fx * baseline / d per valid pixel. Uses the horizontal focal length,
// matching horizontal disparity in rectified geometry.
DepthMap disparity_to_depth(const DisparityMap& disp, const StereoRig& rig,
                            double min_disparity_floor = kDefaultMinDisparityFloor);

// Algebraic inverse of disparity_to_depth, d = fx * baseline / Z.
DisparityMap depth_to_disparity(const DepthMap& depth, const StereoRig& rig);

// PFM I/O, the de-facto interchange format of stereo networks. Grayscale
// only; the header's scale sign selects endianness. Non-positive and
// non-finite entries load as invalid.
DisparityMap load_disparity_pfm(const std::filesystem::path& path);
void save_disparity_pfm(const DisparityMap& disp, const std::filesystem::path& path);

}  // namespace posekit
