#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "posekit/camera.hpp"
#include "posekit/image.hpp"
#include "posekit/mesh.hpp"
#include "posekit/transform.hpp"

namespace posekit {

// Deterministic z-buffer rasterizer. Pixel (i,j) is covered when its center
// (i+0.5, j+0.5) falls inside a triangle (top-left rule on edge ties); depth
// is perspective-correct (1/z interpolated in screen space) and the closest
// surface wins with a strict less-than test. Triangles crossing the near
// plane are clipped against it; there is no far plane and no back-face
// culling. Identical inputs give bit-identical output for any job count.

struct RenderOptions {
  double near_plane = 1.0;  // mm
  int jobs = 1;             // row-band parallelism; never changes the result
};

struct RenderOutput {
  DepthMap depth;
  BinaryMask mask;
};

struct MeshInstance {
  const TriangleMesh* mesh = nullptr;
  RigidTransform pose;
};

// A mesh triangle after camera transform, near clipping and projection.
// Raster innards are exposed so hypothesis scoring can skip full-frame
// raster materialization.
struct ScreenTriangle {
  double x[3], y[3];   // continuous pixel coordinates
  double inv_z[3];     // 1/z, camera frame
  std::int32_t id;     // instance index
  int min_x, max_x, min_y, max_y;  // clamped pixel bounding box
};

// Transform + clip + project every triangle of the scene. Triangles fully
// outside the frustum (or degenerate on screen) are dropped.
std::vector<ScreenTriangle> project_triangles(std::span<const MeshInstance> scene,
                                              const CameraIntrinsics& intr,
                                              double near_plane);

// Reusable framebuffer with O(1) logical clears (generation stamps); one
// renderer per thread, renders to it are exclusive.
class FrameBuffer {
 public:
  FrameBuffer(int width, int height);

  void begin();  // invalidates previous content

  // Rasterizes triangles whose rows intersect [y0, y1); newly covered pixel
  // indices are appended to *covered (first-touch order) when non-null.
  void rasterize(std::span<const ScreenTriangle> tris, int y0, int y1,
                 std::vector<int>* covered);

  int width() const { return width_; }
  int height() const { return height_; }
  bool covered_at(std::size_t idx) const { return stamp_[idx] == generation_; }
  double depth_at(std::size_t idx) const { return depth_[idx]; }
  std::int32_t id_at(std::size_t idx) const { return id_[idx]; }

 private:
  int width_, height_;
  std::uint32_t generation_ = 0;
  std::vector<double> depth_;
  std::vector<std::int32_t> id_;
  std::vector<std::uint32_t> stamp_;
};

// Depth + coverage of a single mesh under a pose.
RenderOutput render_depth(const TriangleMesh& mesh, const RigidTransform& pose,
                          const CameraIntrinsics& intr, const RenderOptions& opts = {});

// Joint z-buffer over a whole scene: closest-surface depth plus the winning
// instance index per pixel (-1 where empty).
struct SceneRender {
  DepthMap depth;
  std::vector<std::int32_t> winner;
};
SceneRender render_scene(std::span<const MeshInstance> scene, const CameraIntrinsics& intr,
                         const RenderOptions& opts = {});

// Pixels where the target mesh wins the joint z-buffer against every other
// instance — the visible cross-section of the target.
BinaryMask render_visible_mask(std::span<const MeshInstance> scene, std::size_t target_index,
                               const CameraIntrinsics& intr, const RenderOptions& opts = {});

}  // namespace posekit
