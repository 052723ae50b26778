#include "posekit/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace posekit {

namespace {

struct CamVertex {
  Vec3 p;  // camera frame
};

// Sutherland-Hodgman clip of one triangle against z >= near. Emits 0, 3 or 4
// vertices into out.
int clip_near(const Vec3 in[3], double near_plane, Vec3 out[4]) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = in[i];
    const Vec3& b = in[(i + 1) % 3];
    const bool a_in = a.z() >= near_plane;
    const bool b_in = b.z() >= near_plane;
    if (a_in) out[n++] = a;
    if (a_in != b_in) {
      const double t = (near_plane - a.z()) / (b.z() - a.z());
      out[n++] = a + t * (b - a);
    }
  }
  return n;
}

void emit_screen_triangle(const Vec3& a, const Vec3& b, const Vec3& c,
                          const CameraIntrinsics& intr, std::int32_t id,
                          std::vector<ScreenTriangle>& out) {
  ScreenTriangle t;
  const Vec3* v[3] = {&a, &b, &c};
  for (int k = 0; k < 3; ++k) {
    t.x[k] = intr.fx * v[k]->x() / v[k]->z() + intr.cx;
    t.y[k] = intr.fy * v[k]->y() / v[k]->z() + intr.cy;
    t.inv_z[k] = 1.0 / v[k]->z();
  }
  // Normalize orientation so every edge function is >= 0 inside.
  const double area2 = (t.x[1] - t.x[0]) * (t.y[2] - t.y[0]) -
                       (t.y[1] - t.y[0]) * (t.x[2] - t.x[0]);
  if (area2 == 0.0) return;  // degenerate on screen
  if (area2 < 0.0) {
    std::swap(t.x[1], t.x[2]);
    std::swap(t.y[1], t.y[2]);
    std::swap(t.inv_z[1], t.inv_z[2]);
  }
  const double min_x = std::min({t.x[0], t.x[1], t.x[2]});
  const double max_x = std::max({t.x[0], t.x[1], t.x[2]});
  const double min_y = std::min({t.y[0], t.y[1], t.y[2]});
  const double max_y = std::max({t.y[0], t.y[1], t.y[2]});
  // Pixel i covers centers at i+0.5; the first candidate center >= min is
  // floor(min - 0.5 + 1), the last candidate <= max is ceil(max - 0.5 - 1).
  t.min_x = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  t.max_x = std::min(intr.width - 1, static_cast<int>(std::ceil(max_x - 0.5)));
  t.min_y = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  t.max_y = std::min(intr.height - 1, static_cast<int>(std::ceil(max_y - 0.5)));
  if (t.min_x > t.max_x || t.min_y > t.max_y) return;
  t.id = id;
  out.push_back(t);
}

// Top-left tie rule: a pixel center exactly on an edge belongs to the
// triangle whose directed edge points down (dy > 0) or is horizontal
// pointing right (dy == 0, dx > 0). Shared edges are covered exactly once.
inline bool edge_tie_includes(double dx, double dy) {
  return dy > 0.0 || (dy == 0.0 && dx > 0.0);
}

}  // namespace

std::vector<ScreenTriangle> project_triangles(std::span<const MeshInstance> scene,
                                              const CameraIntrinsics& intr,
                                              double near_plane) {
  intr.validate();
  std::vector<ScreenTriangle> out;
  for (std::size_t inst = 0; inst < scene.size(); ++inst) {
    const TriangleMesh& mesh = *scene[inst].mesh;
    const RigidTransform& pose = scene[inst].pose;
    std::vector<Vec3> cam(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      cam[i] = pose.apply(mesh.vertices[i]);
    }
    for (const auto& tri : mesh.triangles) {
      const Vec3 v[3] = {cam[tri[0]], cam[tri[1]], cam[tri[2]]};
      if (v[0].z() >= near_plane && v[1].z() >= near_plane && v[2].z() >= near_plane) {
        emit_screen_triangle(v[0], v[1], v[2], intr, static_cast<std::int32_t>(inst), out);
        continue;
      }
      Vec3 poly[4];
      const int n = clip_near(v, near_plane, poly);
      for (int k = 1; k + 1 < n; ++k) {
        emit_screen_triangle(poly[0], poly[k], poly[k + 1], intr,
                             static_cast<std::int32_t>(inst), out);
      }
    }
  }
  return out;
}

FrameBuffer::FrameBuffer(int width, int height)
    : width_(width),
      height_(height),
      depth_(static_cast<std::size_t>(width) * height, 0.0),
      id_(static_cast<std::size_t>(width) * height, -1),
      stamp_(static_cast<std::size_t>(width) * height, 0) {}

void FrameBuffer::begin() {
  ++generation_;
  if (generation_ == 0) {  // stamp wraparound
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    generation_ = 1;
  }
}

void FrameBuffer::rasterize(std::span<const ScreenTriangle> tris, int y0, int y1,
                            std::vector<int>* covered) {
  y0 = std::max(y0, 0);
  y1 = std::min(y1, height_);
  for (const ScreenTriangle& t : tris) {
    const int row_lo = std::max(t.min_y, y0);
    const int row_hi = std::min(t.max_y, y1 - 1);
    if (row_lo > row_hi) continue;

    const double ex0 = t.x[1] - t.x[0], ey0 = t.y[1] - t.y[0];
    const double ex1 = t.x[2] - t.x[1], ey1 = t.y[2] - t.y[1];
    const double ex2 = t.x[0] - t.x[2], ey2 = t.y[0] - t.y[2];
    const bool tie0 = edge_tie_includes(ex0, ey0);
    const bool tie1 = edge_tie_includes(ex1, ey1);
    const bool tie2 = edge_tie_includes(ex2, ey2);

    for (int py = row_lo; py <= row_hi; ++py) {
      const double cy = py + 0.5;
      for (int px = t.min_x; px <= t.max_x; ++px) {
        const double cx = px + 0.5;
        // Edge function e_i > 0 strictly inside; == 0 on the edge.
        const double e0 = ex0 * (cy - t.y[0]) - ey0 * (cx - t.x[0]);
        const double e1 = ex1 * (cy - t.y[1]) - ey1 * (cx - t.x[1]);
        const double e2 = ex2 * (cy - t.y[2]) - ey2 * (cx - t.x[2]);
        if (e0 < 0.0 || e1 < 0.0 || e2 < 0.0) continue;
        if ((e0 == 0.0 && !tie0) || (e1 == 0.0 && !tie1) || (e2 == 0.0 && !tie2)) continue;

        const double sum = e0 + e1 + e2;
        if (sum <= 0.0) continue;
        // Barycentric weights: edge opposite vertex k.
        const double w0 = e1 / sum, w1 = e2 / sum, w2 = e0 / sum;
        const double inv_z = w0 * t.inv_z[0] + w1 * t.inv_z[1] + w2 * t.inv_z[2];
        if (!(inv_z > 0.0)) continue;
        const double z = 1.0 / inv_z;

        const std::size_t idx = static_cast<std::size_t>(py) * width_ + px;
        if (stamp_[idx] != generation_) {
          stamp_[idx] = generation_;
          depth_[idx] = z;
          id_[idx] = t.id;
          if (covered) covered->push_back(static_cast<int>(idx));
        } else if (z < depth_[idx]) {
          depth_[idx] = z;
          id_[idx] = t.id;
        }
      }
    }
  }
}

namespace {

// Runs rasterization over the whole frame, optionally split into row bands.
// Bands own disjoint rows of the shared framebuffer, so per-pixel results
// are independent of the split.
void rasterize_full(FrameBuffer& fb, std::span<const ScreenTriangle> tris, int jobs) {
  const int h = fb.height();
  jobs = std::clamp(jobs, 1, h);
  if (jobs == 1) {
    fb.rasterize(tris, 0, h, nullptr);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int b = 0; b < jobs; ++b) {
    const int y0 = static_cast<int>(static_cast<std::int64_t>(h) * b / jobs);
    const int y1 = static_cast<int>(static_cast<std::int64_t>(h) * (b + 1) / jobs);
    workers.emplace_back([&fb, tris, y0, y1] { fb.rasterize(tris, y0, y1, nullptr); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace

SceneRender render_scene(std::span<const MeshInstance> scene, const CameraIntrinsics& intr,
                         const RenderOptions& opts) {
  for (const MeshInstance& mi : scene) {
    mi.mesh->validate();
    mi.pose.validate();
  }
  const std::vector<ScreenTriangle> tris = project_triangles(scene, intr, opts.near_plane);

  FrameBuffer fb(intr.width, intr.height);
  fb.begin();
  rasterize_full(fb, tris, opts.jobs);

  SceneRender out;
  out.depth = DepthMap(intr.width, intr.height);
  out.winner.assign(static_cast<std::size_t>(intr.width) * intr.height, -1);
  for (std::size_t i = 0; i < out.winner.size(); ++i) {
    if (fb.covered_at(i)) {
      // Interpolated 1/z can round a hair below the plane; depths stay >= near.
      out.depth.value[i] = std::max(fb.depth_at(i), opts.near_plane);
      out.depth.valid[i] = 1;
      out.winner[i] = fb.id_at(i);
    }
  }
  return out;
}

RenderOutput render_depth(const TriangleMesh& mesh, const RigidTransform& pose,
                          const CameraIntrinsics& intr, const RenderOptions& opts) {
  const MeshInstance inst{&mesh, pose};
  SceneRender scene = render_scene(std::span<const MeshInstance>(&inst, 1), intr, opts);
  RenderOutput out;
  out.mask = BinaryMask(intr.width, intr.height);
  for (std::size_t i = 0; i < scene.winner.size(); ++i) {
    out.mask.bits[i] = scene.winner[i] >= 0 ? 1 : 0;
  }
  out.depth = std::move(scene.depth);
  return out;
}

BinaryMask render_visible_mask(std::span<const MeshInstance> scene, std::size_t target_index,
                               const CameraIntrinsics& intr, const RenderOptions& opts) {
  if (target_index >= scene.size()) {
    throw ValidationError("render_visible_mask: target index " + std::to_string(target_index) +
                          " out of range for scene of " + std::to_string(scene.size()) +
                          " instances");
  }
  const SceneRender joint = render_scene(scene, intr, opts);
  BinaryMask mask(intr.width, intr.height);
  const auto target = static_cast<std::int32_t>(target_index);
  for (std::size_t i = 0; i < joint.winner.size(); ++i) {
    mask.bits[i] = joint.winner[i] == target ? 1 : 0;
  }
  return mask;
}

}  // namespace posekit
