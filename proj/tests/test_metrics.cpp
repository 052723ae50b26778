#include <cmath>
#include <fstream>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "posekit/pose_metrics.hpp"
#include "posekit/rng.hpp"
#include "posekit/seg_metrics.hpp"
#include "support.hpp"

using namespace posekit;

namespace {

RigidTransform random_pose(Rng& rng, double t_scale = 30.0) {
  RigidTransform t;
  t.rotation = rng.random_rotation();
  t.translation = rng.uniform_in_box(Vec3(-t_scale, -t_scale, 150.0),
                                     Vec3(t_scale, t_scale, 250.0));
  return t;
}

// Direct per-vertex summation, written independently of the library path.
double add_oracle(const TriangleMesh& mesh, const RigidTransform& gt,
                  const RigidTransform& pred) {
  double total = 0.0;
  for (const Vec3& v : mesh.vertices) {
    const Vec3 a = gt.rotation * v + gt.translation;
    const Vec3 b = pred.rotation * v + pred.translation;
    total += std::sqrt((a.x() - b.x()) * (a.x() - b.x()) +
                       (a.y() - b.y()) * (a.y() - b.y()) +
                       (a.z() - b.z()) * (a.z() - b.z()));
  }
  return total / static_cast<double>(mesh.vertices.size());
}

double proj_oracle(const TriangleMesh& mesh, const RigidTransform& gt,
                   const RigidTransform& pred, const CameraIntrinsics& intr) {
  double total = 0.0;
  for (const Vec3& v : mesh.vertices) {
    const Vec3 a = gt.rotation * v + gt.translation;
    const Vec3 b = pred.rotation * v + pred.translation;
    const double ua = intr.fx * a.x() / a.z() + intr.cx;
    const double va = intr.fy * a.y() / a.z() + intr.cy;
    const double ub = intr.fx * b.x() / b.z() + intr.cx;
    const double vb = intr.fy * b.y() / b.z() + intr.cy;
    total += std::hypot(ua - ub, va - vb);
  }
  return total / static_cast<double>(mesh.vertices.size());
}

BinaryMask rect_mask(int width, int height, int x, int y, int w, int h) {
  BinaryMask m(width, height);
  for (int yy = y; yy < y + h; ++yy) {
    for (int xx = x; xx < x + w; ++xx) m.set(xx, yy);
  }
  return m;
}

}  // namespace

TEST_CASE("add_metric examples") {
  const TriangleMesh cube = testsupport::make_cube(20.0);
  Rng rng(61);
  const RigidTransform gt = random_pose(rng);
  CHECK(add_metric(cube, gt, gt) == 0.0);

  RigidTransform shifted = gt;
  shifted.translation += Vec3(3, 0, 0);
  CHECK(add_metric(cube, gt, shifted) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("add_metric equals the direct-summation oracle") {
  const TriangleMesh tool = testsupport::make_plate_tool();
  Rng rng(62);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform gt = random_pose(rng);
    RigidTransform pred = gt;
    pred.rotation = orthonormalize(axis_angle(Vec3(1, 2, 3).normalized(),
                                              rng.uniform(-0.3, 0.3)) * pred.rotation);
    pred.translation += rng.uniform_in_box(Vec3(-5, -5, -5), Vec3(5, 5, 5));
    const double lib = add_metric(tool, gt, pred);
    const double ora = add_oracle(tool, gt, pred);
    CHECK(std::abs(lib - ora) < 1e-9);
    // Symmetry.
    CHECK(add_metric(tool, pred, gt) == doctest::Approx(lib).epsilon(1e-12));
  }
}

TEST_CASE("add_metric: triangle inequality and left invariance") {
  const TriangleMesh tool = testsupport::make_plate_tool();
  Rng rng(63);
  for (int i = 0; i < 30; ++i) {
    const RigidTransform a = random_pose(rng);
    const RigidTransform b = random_pose(rng);
    const RigidTransform c = random_pose(rng);
    CHECK(add_metric(tool, a, c) <=
          add_metric(tool, a, b) + add_metric(tool, b, c) + 1e-9);

    const RigidTransform g = random_pose(rng);
    const double before = add_metric(tool, a, b);
    const double after = add_metric(tool, compose(g, a), compose(g, b));
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("projection_metric examples and oracle") {
  CameraIntrinsics intr;
  intr.fx = intr.fy = 500.0;
  intr.cx = 320.0;
  intr.cy = 240.0;
  intr.width = 640;
  intr.height = 480;

  // Degenerate mesh with all vertices at the origin isolates one point.
  TriangleMesh point;
  point.vertices = {Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)};
  point.triangles = {{0, 1, 2}};
  RigidTransform gt;
  gt.translation = Vec3(0, 0, 100);
  RigidTransform pred = gt;
  pred.translation.x() += 1.0;
  CHECK(projection_metric(point, gt, gt, intr) == 0.0);
  CHECK(projection_metric(point, gt, pred, intr) == doctest::Approx(5.0).epsilon(1e-12));

  const TriangleMesh tool = testsupport::make_plate_tool();
  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform g = random_pose(rng, 20.0);
    RigidTransform p = g;
    p.rotation = orthonormalize(axis_angle(Vec3(3, 1, 2).normalized(),
                                           rng.uniform(-0.2, 0.2)) * p.rotation);
    p.translation += rng.uniform_in_box(Vec3(-4, -4, -4), Vec3(4, 4, 4));
    CHECK(std::abs(projection_metric(tool, g, p, intr) - proj_oracle(tool, g, p, intr)) <
          1e-9);
  }
}

TEST_CASE("projection_metric names the pose that is behind the camera") {
  const CameraIntrinsics intr = testsupport::make_intrinsics(640, 480, 500.0);
  const TriangleMesh cube = testsupport::make_cube(20.0);
  RigidTransform front;
  front.translation = Vec3(0, 0, 200);
  RigidTransform behind;
  behind.translation = Vec3(0, 0, -200);

  CHECK_THROWS_WITH_AS(projection_metric(cube, behind, front, intr),
                       doctest::Contains("ground-truth"), ValidationError);
  CHECK_THROWS_WITH_AS(projection_metric(cube, front, behind, intr),
                       doctest::Contains("predicted"), ValidationError);
}

TEST_CASE("summarize_pose: worked example") {
  std::vector<PoseMetricRecord> recs{
      {0, 0.5, 2.0}, {1, 2.0, 10.0}, {2, 6.0, 60.0}};
  const PoseMetricSummary s = summarize_pose(recs);
  CHECK(s.n_frames == 3);
  CHECK(s.recalls_add[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.recalls_add[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(s.recalls_add[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(s.recalls_proj[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.recalls_proj[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(s.recalls_proj[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const double mean = (0.5 + 2.0 + 6.0) / 3.0;
  const double var = ((0.5 - mean) * (0.5 - mean) + (2.0 - mean) * (2.0 - mean) +
                      (6.0 - mean) * (6.0 - mean)) /
                     3.0;
  CHECK(s.mean_add == doctest::Approx(mean).epsilon(1e-12));
  CHECK(s.std_add == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

  // Thresholds are strict: a value exactly at the threshold does not count.
  std::vector<PoseMetricRecord> edge{{0, 1.0, 5.0}};
  const PoseMetricSummary se = summarize_pose(edge);
  CHECK(se.recalls_add[0] == 0.0);
  CHECK(se.recalls_add[1] == 1.0);
  CHECK(se.recalls_proj[0] == 0.0);
}

TEST_CASE("summarize_pose: degenerate inputs") {
  std::vector<PoseMetricRecord> one{{0, 0.0, 0.0}};
  const PoseMetricSummary s = summarize_pose(one);
  for (double r : s.recalls_add) CHECK(r == 1.0);
  for (double r : s.recalls_proj) CHECK(r == 1.0);
  CHECK(s.mean_add == 0.0);
  CHECK(s.std_add == 0.0);

  std::vector<PoseMetricRecord> same{{0, 2.0, 7.0}, {1, 2.0, 7.0}, {2, 2.0, 7.0}};
  CHECK(summarize_pose(same).std_add == 0.0);
  CHECK(summarize_pose(same).std_proj == 0.0);

  CHECK_THROWS_AS(summarize_pose(std::vector<PoseMetricRecord>{}), ValidationError);
}

TEST_CASE("recalls are monotone in the threshold") {
  Rng rng(65);
  std::vector<PoseMetricRecord> recs;
  for (int i = 0; i < 50; ++i) {
    recs.push_back({i, rng.uniform(0.0, 8.0), rng.uniform(0.0, 80.0)});
  }
  const PoseMetricSummary s = summarize_pose(recs);
  CHECK(s.recalls_add[0] <= s.recalls_add[1]);
  CHECK(s.recalls_add[1] <= s.recalls_add[2]);
  CHECK(s.recalls_proj[0] <= s.recalls_proj[1]);
  CHECK(s.recalls_proj[1] <= s.recalls_proj[2]);
}

TEST_CASE("mask_iou examples") {
  const BinaryMask a = rect_mask(64, 64, 10, 10, 10, 10);
  CHECK(mask_iou(a, a) == 1.0);

  const BinaryMask b = rect_mask(64, 64, 40, 40, 10, 10);
  CHECK(mask_iou(a, b) == 0.0);

  // Two 10x10 squares overlapping in a 5x10 strip: 50 / 150.
  const BinaryMask c = rect_mask(64, 64, 15, 10, 10, 10);
  CHECK(mask_iou(a, c) == doctest::Approx(50.0 / 150.0).epsilon(1e-12));
  CHECK(mask_iou(c, a) == mask_iou(a, c));

  const BinaryMask empty(64, 64);
  CHECK(mask_iou(empty, empty) == 0.0);

  CHECK_THROWS_AS(mask_iou(a, BinaryMask(32, 64)), ValidationError);
}

TEST_CASE("seg_ap_ar: perfect and empty predictions") {
  SegFrame frame;
  frame.gts.push_back(rect_mask(128, 128, 20, 20, 40, 40));
  frame.predictions.push_back({rect_mask(128, 128, 20, 20, 40, 40), 1.0});
  std::vector<SegFrame> frames{frame};
  const SegMetricSummary s = seg_ap_ar(frames);
  CHECK(s.ap_5095 == 1.0);
  CHECK(s.ar_5095 == 1.0);
  CHECK(s.ap_medium == 1.0);  // 1600 px sits in the medium stratum
  CHECK(s.ap_small == 0.0);   // empty strata report zero
  CHECK(s.ap_large == 0.0);

  SegFrame none;
  none.gts.push_back(rect_mask(128, 128, 20, 20, 40, 40));
  std::vector<SegFrame> no_preds{none};
  const SegMetricSummary z = seg_ap_ar(no_preds);
  CHECK(z.ap_5095 == 0.0);
  CHECK(z.ar_5095 == 0.0);
}

TEST_CASE("seg_ap_ar: two GTs, one perfect prediction") {
  SegFrame frame;
  frame.gts.push_back(rect_mask(256, 256, 10, 10, 30, 30));
  frame.gts.push_back(rect_mask(256, 256, 100, 100, 30, 30));
  frame.predictions.push_back({rect_mask(256, 256, 10, 10, 30, 30), 0.9});
  std::vector<SegFrame> frames{frame};
  const SegMetricSummary s = seg_ap_ar(frames);
  // Recall is 0.5 at every threshold; the curve is precision 1 up to 0.5.
  CHECK(s.ar_5095 == 0.5);
  CHECK(s.ap_5095 == doctest::Approx(51.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("seg_ap_ar: partial-overlap prediction crosses thresholds at 0.739") {
  // 20x20 squares offset by 3 px: IoU = 340/460 = 0.7391..., matching at
  // 0.50..0.70 (five thresholds of ten).
  SegFrame frame;
  frame.gts.push_back(rect_mask(128, 128, 10, 10, 20, 20));
  frame.predictions.push_back({rect_mask(128, 128, 13, 10, 20, 20), 0.8});
  std::vector<SegFrame> frames{frame};
  const SegMetricSummary s = seg_ap_ar(frames);
  CHECK(s.ap_5095 == 0.5);
  CHECK(s.ar_5095 == 0.5);
  CHECK(s.ap_small == 0.5);  // 400 px < 32^2
  CHECK(s.ap_medium == 0.0);
  CHECK(s.ap_large == 0.0);
}

TEST_CASE("seg_ap_ar input validation") {
  SegFrame frame;
  frame.gts.push_back(rect_mask(64, 64, 10, 10, 20, 20));
  frame.predictions.push_back({rect_mask(64, 64, 10, 10, 20, 20), 1.5});
  std::vector<SegFrame> frames{frame};
  CHECK_THROWS_WITH_AS(seg_ap_ar(frames), doctest::Contains("confidence"), ValidationError);

  frames[0].predictions[0].confidence = -0.1;
  CHECK_THROWS_AS(seg_ap_ar(frames), ValidationError);

  frames[0].predictions[0].confidence = std::nan("");
  CHECK_THROWS_AS(seg_ap_ar(frames), ValidationError);

  frames[0].predictions[0].confidence = 0.5;
  frames[0].predictions[0].mask = rect_mask(32, 64, 5, 5, 10, 10);
  CHECK_THROWS_AS(seg_ap_ar(frames), ValidationError);
}

TEST_CASE("seg_ap_ar reproduces the frozen fixture values exactly") {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/seg_fixture.json");
  REQUIRE(in.good());
  const nlohmann::json fixture = nlohmann::json::parse(in);
  const int width = fixture.at("width").get<int>();
  const int height = fixture.at("height").get<int>();

  std::vector<SegFrame> frames;
  for (const auto& jf : fixture.at("frames")) {
    SegFrame frame;
    for (const auto& r : jf.at("gts")) {
      frame.gts.push_back(rect_mask(width, height, r.at(0).get<int>(), r.at(1).get<int>(),
                                    r.at(2).get<int>(), r.at(3).get<int>()));
    }
    for (const auto& p : jf.at("preds")) {
      const auto& r = p.at("rect");
      frame.predictions.push_back(
          {rect_mask(width, height, r.at(0).get<int>(), r.at(1).get<int>(),
                     r.at(2).get<int>(), r.at(3).get<int>()),
           p.at("conf").get<double>()});
    }
    frames.push_back(std::move(frame));
  }

  const SegMetricSummary s = seg_ap_ar(frames);
  // Values computed by tests/oracle/seg_pr_oracle.py (independent integer
  // rectangle arithmetic) and frozen; both sides accumulate the ten
  // thresholds in ascending order, so comparison is exact.
  CHECK(s.ap_5095 == 0.503795379537954);
  CHECK(s.ap_small == 0.7029702970297029);
  CHECK(s.ap_medium == 0.33267326732673275);
  CHECK(s.ap_large == 0.4326732673267327);
  CHECK(s.ar_5095 == 0.53);
}
