#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <vector>

#include "posekit/error.hpp"
#include "posekit/estimator.hpp"
#include "posekit/kdtree.hpp"

namespace posekit {

namespace {

struct Correspondences {
  std::vector<int> model_idx;     // per surviving pair
  std::vector<Vec3> observed;
  double rms = 0.0;
};

// Pairs (observed point, nearest model point) within the gate, found by
// querying the model-frame tree with inverse-transformed observed points.
Correspondences correspond(const KdTree3& tree, const PointCloud& observed,
                           const RigidTransform& pose, double corr_dist) {
  const RigidTransform inv = pose.inverse();
  const double gate2 = corr_dist * corr_dist;
  Correspondences c;
  double sum2 = 0.0;
  for (const Vec3& o : observed.points) {
    const auto hit = tree.nearest(inv.apply(o));
    if (hit.dist2 > gate2) continue;
    c.model_idx.push_back(hit.index);
    c.observed.push_back(o);
    sum2 += hit.dist2;
  }
  if (!c.model_idx.empty()) {
    c.rms = std::sqrt(sum2 / static_cast<double>(c.model_idx.size()));
  }
  return c;
}

// Least-squares rigid transform taking model points onto observed points
// (Kabsch via cross-covariance SVD).
RigidTransform fit_pairs(const PointCloud& model, const Correspondences& c) {
  const std::size_t n = c.model_idx.size();
  Vec3 mc = Vec3::Zero();
  Vec3 oc = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mc += model.points[static_cast<std::size_t>(c.model_idx[i])];
    oc += c.observed[i];
  }
  mc /= static_cast<double>(n);
  oc /= static_cast<double>(n);

  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    h += (model.points[static_cast<std::size_t>(c.model_idx[i])] - mc) *
         (c.observed[i] - oc).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  RigidTransform out;
  out.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  out.translation = oc - out.rotation * mc;
  return out;
}

}  // namespace

IcpResult icp_refine(const PointCloud& model_points, const PointCloud& observed_points,
                     const RigidTransform& init, const EstimatorParams& params) {
  params.validate();
  model_points.validate();
  observed_points.validate();
  init.validate();
  if (model_points.points.size() < 3 || observed_points.points.size() < 3) {
    throw EstimationError("icp_refine: need at least 3 points per cloud, got " +
                          std::to_string(model_points.points.size()) + " model / " +
                          std::to_string(observed_points.points.size()) + " observed");
  }

  const KdTree3 tree(model_points.points);

  IcpResult res;
  res.pose = init;

  Correspondences cur = correspond(tree, observed_points, res.pose, params.icp_corr_dist);
  if (cur.model_idx.size() < 3) {
    throw EstimationError("icp_refine: degenerate correspondences, only " +
                          std::to_string(cur.model_idx.size()) +
                          " pairs within the gate at the initial pose");
  }
  res.trace.push_back({cur.rms, static_cast<int>(cur.model_idx.size())});

  const double rot_tol = deg_to_rad(kIcpConvergeRotDeg);
  for (int iter = 0; iter < params.icp_max_iters; ++iter) {
    const RigidTransform candidate = fit_pairs(model_points, cur);
    Correspondences next =
        correspond(tree, observed_points, candidate, params.icp_corr_dist);
    if (next.model_idx.size() < 3) {
      throw EstimationError("icp_refine: degenerate correspondences, only " +
                            std::to_string(next.model_idx.size()) +
                            " pairs within the gate at iteration " + std::to_string(iter + 1));
    }
    // Re-gating can admit worse pairs and raise the objective; such updates
    // are rejected (slack covers SVD roundoff at the fixed point).
    if (next.rms > cur.rms + kIcpRmsSlack) break;

    const double dt = (candidate.translation - res.pose.translation).norm();
    const double dr = rotation_distance(candidate.rotation, res.pose.rotation);
    res.pose = candidate;
    cur = std::move(next);
    res.n_iters = iter + 1;
    res.trace.push_back({cur.rms, static_cast<int>(cur.model_idx.size())});
    if (dt < params.icp_converge_tol && dr < rot_tol) break;
  }

  res.pose.rotation = orthonormalize(res.pose.rotation);
  const double gate2 = params.icp_corr_dist * params.icp_corr_dist;
  const RigidTransform inv = res.pose.inverse();
  std::size_t inliers = 0;
  for (const Vec3& o : observed_points.points) {
    if (tree.nearest(inv.apply(o)).dist2 < gate2) ++inliers;
  }
  res.inlier_fraction =
      static_cast<double>(inliers) / static_cast<double>(observed_points.points.size());
  return res;
}

}  // namespace posekit
