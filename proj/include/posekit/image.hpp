#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posekit/error.hpp"

namespace posekit {

// Row-major rasters, index = y * width + x. Validity is an explicit flag
// channel; arithmetic never sees NaN sentinels.

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // intensities in [0, 1]

  GrayImage() = default;
  GrayImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0.0) {}

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  void validate() const;
};

struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> value;     // millimetres where valid
  std::vector<std::uint8_t> valid;

  DepthMap() = default;
  DepthMap(int w, int h)
      : width(w),
        height(h),
        value(static_cast<std::size_t>(w) * h, 0.0),
        valid(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool is_valid(int x, int y) const { return valid[index(x, y)] != 0; }
  double at(int x, int y) const { return value[index(x, y)]; }
  void set(int x, int y, double z) {
    value[index(x, y)] = z;
    valid[index(x, y)] = 1;
  }
  void invalidate(int x, int y) {
    value[index(x, y)] = 0.0;
    valid[index(x, y)] = 0;
  }
  std::size_t valid_count() const;

  void validate() const;  // valid entries finite and > 0
};

struct DisparityMap {
  int width = 0;
  int height = 0;
  std::vector<double> value;     // pixels where valid
  std::vector<std::uint8_t> valid;

  DisparityMap() = default;
  DisparityMap(int w, int h)
      : width(w),
        height(h),
        value(static_cast<std::size_t>(w) * h, 0.0),
        valid(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool is_valid(int x, int y) const { return valid[index(x, y)] != 0; }
  double at(int x, int y) const { return value[index(x, y)]; }
  void set(int x, int y, double d) {
    value[index(x, y)] = d;
    valid[index(x, y)] = 1;
  }
  void invalidate(int x, int y) {
    value[index(x, y)] = 0.0;
    valid[index(x, y)] = 0;
  }
  std::size_t valid_count() const;

  void validate() const;
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool get(int x, int y) const { return bits[index(x, y)] != 0; }
  void set(int x, int y, bool v = true) { bits[index(x, y)] = v ? 1 : 0; }
  std::size_t count() const;

  bool operator==(const BinaryMask& other) const = default;
};

inline void require_same_size(int wa, int ha, int wb, int hb, const std::string& what) {
  if (wa != wb || ha != hb) {
    throw ValidationError(what + ": dimension mismatch, " + std::to_string(wa) +
                          "x" + std::to_string(ha) + " vs " + std::to_string(wb) + "x" +
                          std::to_string(hb));
  }
}

}  // namespace posekit
