#pragma once

#include <cstdint>
#include <vector>

#include "posekit/camera.hpp"
#include "posekit/image.hpp"
#include "posekit/mesh.hpp"
#include "posekit/transform.hpp"

namespace posekit {

// Depth-only render-and-compare pose estimation: viewpoint-codebook rotation
// hypotheses at a median back-projected translation, scored against the
// observed depth, the best few refined with point-to-point ICP.

struct EstimatorParams {
  int n_viewpoints = 162;        // icosphere level-2 vertex count
  int n_inplane = 12;            // in-plane rotations per viewpoint
  double score_tau = 3.0;        // mm, depth agreement band for scoring
  int icp_max_iters = 60;
  double icp_corr_dist = 10.0;   // mm, correspondence gate
  double icp_converge_tol = 1e-3;  // mm, translation change at convergence
  int min_mask_pixels = 50;
  std::uint64_t sample_seed = 0;  // model surface sampling stream
  int jobs = 1;                   // hypothesis-scoring threads; never changes results

  void validate() const;  // throws ValidationError
};

struct PoseHypothesis {
  RigidTransform pose;
  double score = 0.0;  // [0, 1]
};

struct EstimateResult {
  RigidTransform pose;
  double score = 0.0;            // render-agreement fraction after refinement
  int n_icp_iters = 0;
  double inlier_fraction = 0.0;  // observed points within icp_corr_dist of the model
  std::uint64_t model_sample_seed = 0;
};

// ICP iteration trace entry; rms_residual is over the gated inlier pairs.
struct IcpIteration {
  double rms_residual = 0.0;  // mm
  int n_inliers = 0;
};

struct IcpResult {
  RigidTransform pose;
  int n_iters = 0;
  double inlier_fraction = 0.0;
  std::vector<IcpIteration> trace;  // accepted states, initial first
};

// Rotation-change convergence threshold, degrees, fixed alongside
// icp_converge_tol (translation).
inline constexpr double kIcpConvergeRotDeg = 0.01;

// Tolerated rms increase (mm) before an ICP update is rejected; absorbs
// roundoff at the converged fixed point.
inline constexpr double kIcpRmsSlack = 1e-9;

// Hypotheses refined after scoring.
inline constexpr int kRefineTopK = 5;

// Model points sampled for ICP.
inline constexpr int kMaxModelPoints = 5000;

// n_viewpoints icosphere directions (first n in construction order of the
// smallest sufficient subdivision level) crossed with n_inplane uniform
// in-plane steps; rotations only, deterministic ordering
// (viewpoint-major, in-plane minor).
std::vector<RigidTransform> sample_viewpoints(const EstimatorParams& params);

// Component-wise median of the back-projected masked valid-depth pixels
// (pixel centers). Throws ValidationError on an empty mask or when no masked
// pixel has valid depth.
Vec3 init_translation(const BinaryMask& mask, const DepthMap& depth,
                      const CameraIntrinsics& intr);

// Depth agreement over the union of the rendered mask and the observed mask:
// fraction of union pixels where both depths are valid and |dz| < score_tau.
// Empty union scores 0.
double score_hypothesis(const TriangleMesh& mesh, const RigidTransform& hyp_pose,
                        const CameraIntrinsics& intr, const DepthMap& observed_depth,
                        const BinaryMask& mask, double score_tau);

// Point-to-point ICP: nearest-neighbor correspondences from observed points
// to the transformed model (kd-tree in model frame), pairs beyond
// icp_corr_dist discarded, closed-form SVD update. An update that would
// raise the inlier rms residual is rejected and iteration stops, so the
// trace is non-increasing. Throws EstimationError when fewer than 3 pairs
// survive the gate.
IcpResult icp_refine(const PointCloud& model_points, const PointCloud& observed_points,
                     const RigidTransform& init, const EstimatorParams& params);

// Full pipeline for one frame. Throws ValidationError (mask below
// min_mask_pixels, no valid depth) and EstimationError (every hypothesis
// scored 0, or all refinements degenerate).
EstimateResult estimate_pose(const TriangleMesh& mesh, const CameraIntrinsics& intr,
                             const DepthMap& observed_depth, const BinaryMask& mask,
                             const EstimatorParams& params);

}  // namespace posekit
