#pragma once

#include <array>
#include <span>
#include <vector>

#include "posekit/camera.hpp"
#include "posekit/mesh.hpp"
#include "posekit/transform.hpp"

namespace posekit {

// Average distance of model points: mean over all mesh vertices of the
// Euclidean distance between the vertex under the ground-truth and the
// predicted pose, in mm. Every vertex counts; no sampling.
double add_metric(const TriangleMesh& mesh, const RigidTransform& gt,
                  const RigidTransform& pred);

// Mean pixel distance between the projections of all mesh vertices under
// both poses. Throws ValidationError naming the offending pose if any
// vertex lands behind the camera.
double projection_metric(const TriangleMesh& mesh, const RigidTransform& gt,
                         const RigidTransform& pred, const CameraIntrinsics& intr);

struct PoseMetricRecord {
  int frame_id = 0;
  double add_mm = 0.0;
  double proj_px = 0.0;
};

inline constexpr std::array<double, 3> kAddThresholdsMm{1.0, 2.5, 5.0};
inline constexpr std::array<double, 3> kProjThresholdsPx{5.0, 20.0, 50.0};

struct PoseMetricSummary {
  std::array<double, 3> recalls_add{};   // metric < 1.0 / 2.5 / 5.0 mm
  std::array<double, 3> recalls_proj{};  // metric < 5 / 20 / 50 px
  double mean_add = 0.0;
  double std_add = 0.0;   // population standard deviation
  double mean_proj = 0.0;
  double std_proj = 0.0;
  int n_frames = 0;
};

// Recall at threshold tau = fraction of records with metric strictly below
// tau; mean and population sigma over all records. Throws on empty input.
PoseMetricSummary summarize_pose(std::span<const PoseMetricRecord> records);

}  // namespace posekit
