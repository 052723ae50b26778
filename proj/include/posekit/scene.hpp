#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "posekit/camera.hpp"
#include "posekit/transform.hpp"

namespace posekit {

// BOP-style scene directory:
//   scene_camera.json   {"0": {fx, fy, cx, cy, width, height, baseline_mm, depth_scale}, ...}
//   scene_gt.json       {"0": [{cam_R_m2c: [9 row-major], cam_t_m2c: [3 mm], obj_id}], ...}
//   depth/000000.png    16-bit grayscale, depth_scale mm per unit, 0 = invalid
//   mask_visib/000000.png, mask_full/000000.png, disparity/000000.pfm,
//   rgb_left/000000.png, rgb_right/000000.png   (each optional)

struct SceneFrame {
  int frame_id = 0;
  StereoRig camera;
  RigidTransform gt_pose;  // model -> camera
  int object_id = 1;
  double depth_scale = 0.1;  // mm per stored depth unit

  std::filesystem::path depth_path;
  std::filesystem::path mask_visib_path;  // empty when absent
  std::filesystem::path mask_full_path;
  std::filesystem::path disparity_path;
  std::filesystem::path left_path;
  std::filesystem::path right_path;
};

// Frames sorted by id. Throws IoError for missing files (the two JSONs and
// every depth PNG), ParseError/ValidationError for schema violations, each
// naming the offending JSON path or frame.
std::vector<SceneFrame> load_scene(const std::filesystem::path& dir);

// "000000" for frame 0.
std::string frame_name(int frame_id);

// Per-frame estimation outcome as persisted in the results JSON. Failed
// frames carry frame_id + status only; every other field keeps its default.
struct PoseResult {
  int frame_id = 0;
  std::string status = "ok";  // "ok" | "failed"
  RigidTransform pose;
  double score = 0.0;
  int n_icp_iters = 0;
  double inlier_fraction = 0.0;

  bool ok() const { return status == "ok"; }
  bool operator==(const PoseResult& other) const;
};

// JSON array of {frame_id, status, R (9 row-major), t (3 mm), score,
// n_icp_iters, inlier_fraction}; load(write(x)) == x exactly.
void write_results(const std::filesystem::path& path, std::span<const PoseResult> results);
std::vector<PoseResult> load_results(const std::filesystem::path& path);

}  // namespace posekit
