#pragma once

#include <cstdint>

#include "posekit/camera.hpp"
#include "posekit/image.hpp"
#include "posekit/mesh.hpp"
#include "posekit/renderer.hpp"

namespace posekit {

struct PseudoLabelParams {
  double epsilon_mm = 1.0;  // depth-consistency threshold

  void validate() const;
};

// Exact audit of the filtering: projected = retained + rejected_occluded +
// rejected_no_depth.
struct PseudoLabelReport {
  std::int64_t projected_pixels = 0;
  std::int64_t retained_pixels = 0;
  std::int64_t rejected_occluded = 0;
  std::int64_t rejected_no_depth = 0;
};

struct PseudoLabelResult {
  BinaryMask mask;
  PseudoLabelReport report;
};

// Visible-tool mask: project the model at the ground-truth pose, then keep
// only pixels whose rendered depth agrees with the observed depth within
// epsilon (strict |dz| < epsilon; pixels with no observed depth are
// rejected and tallied separately).
PseudoLabelResult generate_pseudo_mask(const TriangleMesh& mesh, const RigidTransform& gt_pose,
                                       const CameraIntrinsics& intr,
                                       const DepthMap& observed_depth,
                                       const PseudoLabelParams& params = {});

}  // namespace posekit
