#include "posekit/pose_metrics.hpp"

#include <cmath>
#include <string>

namespace posekit {

double add_metric(const TriangleMesh& mesh, const RigidTransform& gt,
                  const RigidTransform& pred) {
  mesh.validate();
  gt.validate();
  pred.validate();
  double sum = 0.0;
  for (const Vec3& v : mesh.vertices) {
    sum += (gt.apply(v) - pred.apply(v)).norm();
  }
  return sum / static_cast<double>(mesh.vertices.size());
}

double projection_metric(const TriangleMesh& mesh, const RigidTransform& gt,
                         const RigidTransform& pred, const CameraIntrinsics& intr) {
  mesh.validate();
  gt.validate();
  pred.validate();
  intr.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto pg = project(intr, gt.apply(mesh.vertices[i]));
    if (!pg) {
      throw ValidationError("projection metric: vertex " + std::to_string(i) +
                            " behind camera under the ground-truth pose");
    }
    const auto pp = project(intr, pred.apply(mesh.vertices[i]));
    if (!pp) {
      throw ValidationError("projection metric: vertex " + std::to_string(i) +
                            " behind camera under the predicted pose");
    }
    sum += (*pg - *pp).norm();
  }
  return sum / static_cast<double>(mesh.vertices.size());
}

PoseMetricSummary summarize_pose(std::span<const PoseMetricRecord> records) {
  if (records.empty()) {
    throw ValidationError("summarize_pose: no records");
  }
  PoseMetricSummary s;
  s.n_frames = static_cast<int>(records.size());
  const double n = static_cast<double>(records.size());

  for (std::size_t t = 0; t < kAddThresholdsMm.size(); ++t) {
    int hits = 0;
    for (const auto& r : records) {
      if (r.add_mm < kAddThresholdsMm[t]) ++hits;
    }
    s.recalls_add[t] = hits / n;
  }
  for (std::size_t t = 0; t < kProjThresholdsPx.size(); ++t) {
    int hits = 0;
    for (const auto& r : records) {
      if (r.proj_px < kProjThresholdsPx[t]) ++hits;
    }
    s.recalls_proj[t] = hits / n;
  }

  double sum_add = 0.0, sum_proj = 0.0;
  for (const auto& r : records) {
    sum_add += r.add_mm;
    sum_proj += r.proj_px;
  }
  s.mean_add = sum_add / n;
  s.mean_proj = sum_proj / n;

  double var_add = 0.0, var_proj = 0.0;
  for (const auto& r : records) {
    var_add += (r.add_mm - s.mean_add) * (r.add_mm - s.mean_add);
    var_proj += (r.proj_px - s.mean_proj) * (r.proj_px - s.mean_proj);
  }
  s.std_add = std::sqrt(var_add / n);
  s.std_proj = std::sqrt(var_proj / n);
  return s;
}

}  // namespace posekit
