#include "posekit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace posekit {

void GrayImage::validate() const {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("gray image: pixel count " + std::to_string(pixels.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  for (double v : pixels) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError("gray image: intensity " + std::to_string(v) +
                            " outside [0, 1]");
    }
  }
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void DepthMap::validate() const {
  if (value.size() != valid.size() || value.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("depth map: channel sizes do not match dimensions");
  }
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (valid[i] && (!std::isfinite(value[i]) || value[i] <= 0.0)) {
      throw ValidationError("depth map: valid pixel " + std::to_string(i) +
                            " holds non-positive or non-finite depth " +
                            std::to_string(value[i]));
    }
  }
}

std::size_t DisparityMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void DisparityMap::validate() const {
  if (value.size() != valid.size() || value.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("disparity map: channel sizes do not match dimensions");
  }
  // Zero disparity (a match at infinity) is representable; PFM ingestion and
  // depth conversion are where strictly-positive is enforced.
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (valid[i] && (!std::isfinite(value[i]) || value[i] < 0.0)) {
      throw ValidationError("disparity map: valid pixel " + std::to_string(i) +
                            " holds negative or non-finite disparity " +
                            std::to_string(value[i]));
    }
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

}  // namespace posekit
