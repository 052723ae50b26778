#pragma once

#include <vector>

#include "posekit/types.hpp"

namespace posekit {

// Unit directions of an icosphere: the 12 icosahedron vertices at level 0,
// each subdivision splitting every edge at its normalized midpoint
// (12, 42, 162, 642, ... vertices). Construction order is fixed: base
// vertices first, then midpoints in face-processing order, so any prefix is
// a deterministic sub-sampling.
std::vector<Vec3> icosphere_vertices(int level);

int icosphere_vertex_count(int level);

// Rotation mapping direction dir (unit) to the camera's viewing axis: the
// returned R satisfies R * dir = (0, 0, -1), with a fixed deterministic
// in-plane convention.
Mat3 facing_rotation(const Vec3& dir);

}  // namespace posekit
