#pragma once

#include <optional>

#include "posekit/error.hpp"
#include "posekit/types.hpp"

namespace posekit {

// Rectified pinhole camera. Intrinsics in pixels, 3D coordinates in
// millimetres. Continuous image coordinates: u rightward, v downward,
// origin at the top-left of the image; pixel (i,j) of a raster samples
// the continuous point (i+0.5, j+0.5).
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const;  // throws ValidationError naming the bad field
};

// Rectified stereo pair sharing one set of intrinsics.
struct StereoRig {
  CameraIntrinsics intrinsics;
  double baseline_mm = 0.0;

  void validate() const;
};

// Camera-space z at or below this counts as behind the camera.
inline constexpr double kBehindCameraZ = 1e-6;  // mm

// Pinhole projection of a camera-frame point. Returns nullopt when the
// point is behind the camera; the projection may fall outside the image.
std::optional<Vec2> project(const CameraIntrinsics& intr, const Vec3& p_cam);

// Inverse of project at depth z (mm). Throws ValidationError for z <= 0.
Vec3 back_project(const CameraIntrinsics& intr, double u, double v, double z);

}  // namespace posekit
