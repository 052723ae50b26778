#include "posekit/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "posekit/error.hpp"
#include "posekit/renderer.hpp"

namespace posekit {

void EstimatorParams::validate() const {
  auto need_count = [](const char* name, int v) {
    if (v < 1) {
      throw ValidationError("EstimatorParams." + std::string(name) + " must be >= 1, got " +
                            std::to_string(v));
    }
  };
  auto need_dist = [](const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ValidationError("EstimatorParams." + std::string(name) + " must be > 0, got " +
                            std::to_string(v));
    }
  };
  need_count("n_viewpoints", n_viewpoints);
  need_count("n_inplane", n_inplane);
  need_count("icp_max_iters", icp_max_iters);
  need_count("min_mask_pixels", min_mask_pixels);
  need_count("jobs", jobs);
  need_dist("score_tau", score_tau);
  need_dist("icp_corr_dist", icp_corr_dist);
  need_dist("icp_converge_tol", icp_converge_tol);
}

Vec3 init_translation(const BinaryMask& mask, const DepthMap& depth,
                      const CameraIntrinsics& intr) {
  intr.validate();
  require_same_size(mask.width, mask.height, depth.width, depth.height, "init_translation");
  require_same_size(mask.width, mask.height, intr.width, intr.height,
                    "init_translation (mask vs intrinsics)");
  if (mask.count() == 0) {
    throw ValidationError("init_translation: empty mask");
  }

  std::vector<double> xs, ys, zs;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y) || !depth.is_valid(x, y)) continue;
      const Vec3 p = back_project(intr, x + 0.5, y + 0.5, depth.at(x, y));
      xs.push_back(p.x());
      ys.push_back(p.y());
      zs.push_back(p.z());
    }
  }
  if (xs.empty()) {
    throw ValidationError("init_translation: no masked pixel has valid depth");
  }

  auto median = [](std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (n % 2 == 0) {
      const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
      m = 0.5 * (lo + m);
    }
    return m;
  };
  return {median(xs), median(ys), median(zs)};
}

namespace {

// Score with a caller-owned framebuffer so hypothesis sweeps reuse storage.
double score_with(FrameBuffer& fb, std::span<const ScreenTriangle> tris,
                  const DepthMap& observed_depth, const BinaryMask& mask,
                  std::size_t mask_pixels, double score_tau, std::vector<int>& covered) {
  covered.clear();
  fb.begin();
  fb.rasterize(tris, 0, fb.height(), &covered);

  std::size_t matches = 0;
  std::size_t rendered_only = 0;
  for (const int idx : covered) {
    const auto i = static_cast<std::size_t>(idx);
    if (mask.bits[i] == 0) ++rendered_only;
    if (observed_depth.valid[i] != 0 &&
        std::abs(fb.depth_at(i) - observed_depth.value[i]) < score_tau) {
      ++matches;
    }
  }
  const std::size_t uni = mask_pixels + rendered_only;
  if (uni == 0) return 0.0;
  return static_cast<double>(matches) / static_cast<double>(uni);
}

std::vector<ScreenTriangle> hypothesis_triangles(const TriangleMesh& mesh,
                                                 const RigidTransform& pose,
                                                 const CameraIntrinsics& intr) {
  const MeshInstance inst{&mesh, pose};
  return project_triangles({&inst, 1}, intr, RenderOptions{}.near_plane);
}

}  // namespace

double score_hypothesis(const TriangleMesh& mesh, const RigidTransform& hyp_pose,
                        const CameraIntrinsics& intr, const DepthMap& observed_depth,
                        const BinaryMask& mask, double score_tau) {
  intr.validate();
  hyp_pose.validate();
  require_same_size(observed_depth.width, observed_depth.height, intr.width, intr.height,
                    "score_hypothesis (depth vs intrinsics)");
  require_same_size(mask.width, mask.height, intr.width, intr.height,
                    "score_hypothesis (mask vs intrinsics)");
  FrameBuffer fb(intr.width, intr.height);
  std::vector<int> covered;
  return score_with(fb, hypothesis_triangles(mesh, hyp_pose, intr), observed_depth, mask,
                    mask.count(), score_tau, covered);
}

EstimateResult estimate_pose(const TriangleMesh& mesh, const CameraIntrinsics& intr,
                             const DepthMap& observed_depth, const BinaryMask& mask,
                             const EstimatorParams& params) {
  params.validate();
  intr.validate();
  mesh.validate();
  require_same_size(observed_depth.width, observed_depth.height, intr.width, intr.height,
                    "estimate_pose (depth vs intrinsics)");
  require_same_size(mask.width, mask.height, intr.width, intr.height,
                    "estimate_pose (mask vs intrinsics)");

  const std::size_t mask_pixels = mask.count();
  if (mask_pixels < static_cast<std::size_t>(params.min_mask_pixels)) {
    throw ValidationError("estimate_pose: mask has " + std::to_string(mask_pixels) +
                          " pixels, below min_mask_pixels = " +
                          std::to_string(params.min_mask_pixels));
  }

  const Vec3 t0 = init_translation(mask, observed_depth, intr);

  const std::vector<RigidTransform> rotations = sample_viewpoints(params);
  std::vector<RigidTransform> hyps(rotations.size());
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    hyps[i].rotation = rotations[i].rotation;
    hyps[i].translation = t0;
  }

  std::vector<double> scores(hyps.size(), 0.0);
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      FrameBuffer fb(intr.width, intr.height);
      std::vector<int> covered;
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= hyps.size()) break;
        scores[i] = score_with(fb, hypothesis_triangles(mesh, hyps[i], intr), observed_depth,
                               mask, mask_pixels, params.score_tau, covered);
      }
    };
    const int jobs = std::min<int>(params.jobs, static_cast<int>(hyps.size()));
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(jobs));
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  if (*std::max_element(scores.begin(), scores.end()) <= 0.0) {
    throw EstimationError("estimate_pose: all " + std::to_string(hyps.size()) +
                          " hypothesis scores are zero; observed depth does not support the "
                          "model at the initialized translation");
  }

  std::vector<std::size_t> order(hyps.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top_k = std::min<std::size_t>(kRefineTopK, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });

  PointCloud observed;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y) || !observed_depth.is_valid(x, y)) continue;
      observed.points.push_back(back_project(intr, x + 0.5, y + 0.5, observed_depth.at(x, y)));
    }
  }
  const PointCloud model_pts = sample_surface_points(mesh, kMaxModelPoints, params.sample_seed);

  FrameBuffer fb(intr.width, intr.height);
  std::vector<int> covered;
  EstimateResult best;
  bool have_result = false;
  std::string first_error;
  for (std::size_t k = 0; k < top_k; ++k) {
    try {
      const IcpResult refined = icp_refine(model_pts, observed, hyps[order[k]], params);
      const double s = score_with(fb, hypothesis_triangles(mesh, refined.pose, intr),
                                  observed_depth, mask, mask_pixels, params.score_tau, covered);
      if (!have_result || s > best.score) {
        best.pose = refined.pose;
        best.score = s;
        best.n_icp_iters = refined.n_iters;
        best.inlier_fraction = refined.inlier_fraction;
        best.model_sample_seed = params.sample_seed;
        have_result = true;
      }
    } catch (const EstimationError& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (!have_result) {
    throw EstimationError("estimate_pose: every refinement candidate was degenerate; first: " +
                          first_error);
  }
  return best;
}

}  // namespace posekit
