#include "posekit/viewpoints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "posekit/error.hpp"
#include "posekit/estimator.hpp"
#include "posekit/transform.hpp"

namespace posekit {

namespace {

struct IcoMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh base_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh m;
  m.verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (auto& v : m.verts) v.normalize();
  m.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return m;
}

IcoMesh subdivide(const IcoMesh& in) {
  IcoMesh out;
  out.verts = in.verts;
  out.faces.reserve(in.faces.size() * 4);
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = (out.verts[static_cast<std::size_t>(a)] + out.verts[static_cast<std::size_t>(b)])
                 .normalized();
    const int idx = static_cast<int>(out.verts.size());
    out.verts.push_back(m);
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& f : in.faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace

int icosphere_vertex_count(int level) {
  // V(0) = 12; each level adds one vertex per edge, E(k) = 30 * 4^k.
  if (level < 0) throw ValidationError("icosphere level must be >= 0");
  std::int64_t v = 12;
  std::int64_t e = 30;
  for (int k = 0; k < level; ++k) {
    v += e;
    e *= 4;
  }
  return static_cast<int>(v);
}

std::vector<Vec3> icosphere_vertices(int level) {
  if (level < 0 || level > 7) {
    throw ValidationError("icosphere level out of range: " + std::to_string(level));
  }
  IcoMesh m = base_icosahedron();
  for (int k = 0; k < level; ++k) m = subdivide(m);
  return m.verts;
}

Mat3 facing_rotation(const Vec3& dir) {
  const Vec3 d = dir.normalized();
  // Rows of R: right, down, -view; third row -d makes R*d = (0,0,-1).
  const Vec3 r3 = -d;
  Vec3 helper(0.0, 0.0, 1.0);
  if (std::abs(d.z()) > 0.9) helper = Vec3(1.0, 0.0, 0.0);
  const Vec3 r1 = helper.cross(r3).normalized();
  const Vec3 r2 = r3.cross(r1);
  Mat3 r;
  r.row(0) = r1;
  r.row(1) = r2;
  r.row(2) = r3;
  return r;
}

std::vector<RigidTransform> sample_viewpoints(const EstimatorParams& params) {
  params.validate();
  int level = 0;
  while (icosphere_vertex_count(level) < params.n_viewpoints) {
    if (++level > 7) {
      throw ValidationError("n_viewpoints too large: " + std::to_string(params.n_viewpoints));
    }
  }
  const std::vector<Vec3> dirs = icosphere_vertices(level);

  std::vector<RigidTransform> out;
  out.reserve(static_cast<std::size_t>(params.n_viewpoints) * params.n_inplane);
  const double step = 2.0 * 3.14159265358979323846 / params.n_inplane;
  for (int i = 0; i < params.n_viewpoints; ++i) {
    const Mat3 base = facing_rotation(dirs[static_cast<std::size_t>(i)]);
    for (int k = 0; k < params.n_inplane; ++k) {
      RigidTransform pose;
      pose.rotation = rot_z(step * k) * base;
      out.push_back(pose);
    }
  }
  return out;
}

}  // namespace posekit
