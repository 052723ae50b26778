#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posekit/rng.hpp"

namespace testsupport {

using posekit::Vec3;

void append_box(TriangleMesh& mesh, const Vec3& lo, const Vec3& hi) {
  const int base = static_cast<int>(mesh.vertices.size());
  for (int corner = 0; corner < 8; ++corner) {
    mesh.vertices.emplace_back((corner & 1) ? hi.x() : lo.x(),
                               (corner & 2) ? hi.y() : lo.y(),
                               (corner & 4) ? hi.z() : lo.z());
  }
  static constexpr int faces[12][3] = {
      {0, 2, 1}, {1, 2, 3},  // z = lo
      {4, 5, 6}, {5, 7, 6},  // z = hi
      {0, 1, 4}, {1, 5, 4},  // y = lo
      {2, 6, 3}, {3, 6, 7},  // y = hi
      {0, 4, 2}, {2, 4, 6},  // x = lo
      {1, 3, 5}, {3, 7, 5},  // x = hi
  };
  for (const auto& f : faces) {
    mesh.triangles.push_back({base + f[0], base + f[1], base + f[2]});
  }
}

TriangleMesh make_cube(double edge) {
  TriangleMesh mesh;
  const double h = edge / 2.0;
  append_box(mesh, Vec3(-h, -h, -h), Vec3(h, h, h));
  mesh.validate();
  return mesh;
}

TriangleMesh make_plate_tool() {
  TriangleMesh mesh;
  // L outline in the xy plane, 2.5 mm thick.
  append_box(mesh, Vec3(-25.0, -18.0, -1.25), Vec3(25.0, -4.0, 1.25));
  append_box(mesh, Vec3(-25.0, -4.0, -1.25), Vec3(-11.0, 22.0, 1.25));
  // Tab on the +z face only: breaks the front/back mirror symmetry.
  append_box(mesh, Vec3(8.0, -16.0, 1.25), Vec3(20.0, -6.0, 3.75));
  mesh.validate();
  return mesh;
}

TriangleMesh make_cross_tool() {
  TriangleMesh mesh;
  const double h = 0.3;
  // Plate A, normal +z: 44 x 30 footprint, corner notches [14,22]x[7,15]
  // and [-22,-12]x[-15,-9] (notch first moments cancel to ~0.1 mm).
  append_box(mesh, Vec3(-22.0, -9.0, -h), Vec3(-12.0, 15.0, h));
  append_box(mesh, Vec3(-12.0, -15.0, -h), Vec3(14.0, 15.0, h));
  append_box(mesh, Vec3(14.0, -15.0, -h), Vec3(22.0, 7.0, h));
  // Plate B, normal +x: 24 x 28 in (y, z), notches [6,12]x[8,14] and
  // [-12,-4]x[-14,-10].
  append_box(mesh, Vec3(-h, -4.0, -14.0), Vec3(h, 12.0, -10.0));
  append_box(mesh, Vec3(-h, -12.0, -10.0), Vec3(h, 12.0, 8.0));
  append_box(mesh, Vec3(-h, -12.0, 8.0), Vec3(h, 6.0, 14.0));
  // Plate C, normal +y: 32 x 20 in (x, z), notches [10,16]x[-10,-5] and
  // [-16,-9]x[6,10].
  append_box(mesh, Vec3(-16.0, -h, -10.0), Vec3(-9.0, h, 6.0));
  append_box(mesh, Vec3(-9.0, -h, -10.0), Vec3(10.0, h, 10.0));
  append_box(mesh, Vec3(10.0, -h, -5.0), Vec3(16.0, h, 10.0));
  mesh.validate();
  return mesh;
}

CameraIntrinsics make_intrinsics(int width, int height, double f) {
  CameraIntrinsics intr;
  intr.fx = f;
  intr.fy = f;
  intr.cx = width / 2.0;
  intr.cy = height / 2.0;
  intr.width = width;
  intr.height = height;
  intr.validate();
  return intr;
}

namespace {

// Moller-Trumbore for a ray from the origin with direction d (unnormalised,
// d.z == 1 so the ray parameter equals camera-space z). Returns z or nullopt.
std::optional<double> intersect(const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = d.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = -a;  // ray origin minus a
  const double u = tvec.dot(pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 qvec = tvec.cross(e1);
  const double v = d.dot(qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(qvec) * inv_det;
  if (t <= 0.0) return std::nullopt;
  return t;
}

}  // namespace

DepthMap raycast_depth(const TriangleMesh& mesh, const RigidTransform& pose,
                       const CameraIntrinsics& intr, double near_plane) {
  std::vector<Vec3> cam(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    cam[i] = pose.rotation * mesh.vertices[i] + pose.translation;
  }
  DepthMap depth(intr.width, intr.height);
  for (int y = 0; y < intr.height; ++y) {
    for (int x = 0; x < intr.width; ++x) {
      const Vec3 dir((x + 0.5 - intr.cx) / intr.fx, (y + 0.5 - intr.cy) / intr.fy, 1.0);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& tri : mesh.triangles) {
        const auto z = intersect(dir, cam[tri[0]], cam[tri[1]], cam[tri[2]]);
        if (z && *z >= near_plane && *z < best) best = *z;
      }
      if (std::isfinite(best)) depth.set(x, y, best);
    }
  }
  return depth;
}

GrayImage noise_texture(int width, int height, std::uint64_t seed) {
  posekit::Rng rng(seed);
  GrayImage img(width, height);
  for (double& p : img.pixels) p = rng.uniform();
  return img;
}

StereoPair shifted_pair(int width, int height, int shift, std::uint64_t seed) {
  const GrayImage tex = noise_texture(width + shift, height, seed);
  StereoPair pair{GrayImage(width, height), GrayImage(width, height)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      pair.left.at(x, y) = tex.at(x, y);
      pair.right.at(x, y) = tex.at(x + shift, y);
    }
  }
  return pair;
}

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / "posekit_tests" / tag;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
