#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "posekit/error.hpp"
#include "posekit/transform.hpp"
#include "posekit/types.hpp"

namespace posekit {

// Triangle soup in millimetres, model frame. Faces with more than three
// vertices are fan-triangulated from vertex 0 at load time.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  void validate() const;  // throws ValidationError naming the violated invariant

  struct Bounds {
    Vec3 min;
    Vec3 max;
  };
  Bounds bounds() const;
  Vec3 centroid() const;  // vertex centroid
};

// Loads an ASCII PLY (.ply) or OBJ (.obj) mesh; format chosen by extension,
// falling back to content sniffing. Positions and faces only. Units are
// taken as millimetres as stored. Throws ParseError (with line number) or
// ValidationError.
TriangleMesh load_mesh(const std::filesystem::path& path);

TriangleMesh load_mesh_ply(const std::filesystem::path& path);
TriangleMesh load_mesh_obj(const std::filesystem::path& path);

// Unordered 3D points in millimetres, frame stated by the caller.
struct PointCloud {
  std::vector<Vec3> points;

  void validate() const;  // rejects non-finite coordinates
};

// Applies pose to every point.
PointCloud transform_points(const RigidTransform& pose, const PointCloud& pts);

// Area-weighted surface sampling with a deterministic stream; at most
// max_points points (fewer only for degenerate zero-area meshes, which yield
// the vertex list instead).
PointCloud sample_surface_points(const TriangleMesh& mesh, int max_points, std::uint64_t seed);

}  // namespace posekit
