#include "posekit/camera.hpp"

#include <string>

namespace posekit {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ValidationError("intrinsics: focal lengths must be positive (fx=" +
                          std::to_string(fx) + ", fy=" + std::to_string(fy) + ")");
  }
  if (width < 1 || height < 1) {
    throw ValidationError("intrinsics: image size must be at least 1x1, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw ValidationError("intrinsics: principal point (" + std::to_string(cx) + ", " +
                          std::to_string(cy) + ") outside image " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
}

void StereoRig::validate() const {
  intrinsics.validate();
  if (!(baseline_mm > 0.0)) {
    throw ValidationError("stereo rig: baseline must be positive, got " +
                          std::to_string(baseline_mm) + " mm");
  }
}

std::optional<Vec2> project(const CameraIntrinsics& intr, const Vec3& p_cam) {
  if (p_cam.z() <= kBehindCameraZ) return std::nullopt;
  return Vec2(intr.fx * p_cam.x() / p_cam.z() + intr.cx,
              intr.fy * p_cam.y() / p_cam.z() + intr.cy);
}

Vec3 back_project(const CameraIntrinsics& intr, double u, double v, double z) {
  if (!(z > 0.0)) {
    throw ValidationError("back_project: depth must be positive, got " + std::to_string(z) +
                          " mm");
  }
  return Vec3((u - intr.cx) * z / intr.fx, (v - intr.cy) * z / intr.fy, z);
}

}  // namespace posekit
