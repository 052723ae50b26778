#pragma once

// Shared fixtures and independent oracles for the test suite. The oracles
// deliberately share no code with the library paths they check.

#include <cstdint>
#include <filesystem>
#include <string>

#include "posekit/camera.hpp"
#include "posekit/image.hpp"
#include "posekit/mesh.hpp"
#include "posekit/transform.hpp"

namespace testsupport {

using posekit::BinaryMask;
using posekit::CameraIntrinsics;
using posekit::DepthMap;
using posekit::GrayImage;
using posekit::RigidTransform;
using posekit::TriangleMesh;

// Axis-aligned cube centered at the origin.
TriangleMesh make_cube(double edge);

// Axis-aligned box [lo, hi] appended to an existing mesh.
void append_box(TriangleMesh& mesh, const posekit::Vec3& lo, const posekit::Vec3& hi);

// The test tool: a thin chiral L-plate (2.5 mm) with a tab on one face.
// Thin so the median of the visible surface stays close to the model
// origin from every view direction; chiral so no two poses render alike.
TriangleMesh make_plate_tool();

// Three mutually orthogonal notched plates (0.6 mm) sharing the origin.
// Built for pose estimation under uniform random rotations: some plate is
// always within 55 degrees of face-on (no degenerate silhouette), every
// face plane passes within 0.3 mm of the origin (the visible-surface
// median tracks the model origin), the orthogonal faces constrain all six
// degrees of freedom in refinement, and the unequal plate sizes plus
// moment-balanced corner notches leave no rotational or mirror symmetry.
// The plates are thin because point-to-point refinement on a plate stalls
// once the far-end misalignment is comparable to the front/back face gap.
TriangleMesh make_cross_tool();

CameraIntrinsics make_intrinsics(int width, int height, double f);

// Per-pixel-center ray casting against every triangle (Moller-Trumbore);
// hits closer than near_plane are ignored, like the renderer's clip.
DepthMap raycast_depth(const TriangleMesh& mesh, const RigidTransform& pose,
                       const CameraIntrinsics& intr, double near_plane = 1.0);

// Dense per-pixel uniform noise in [0, 1].
GrayImage noise_texture(int width, int height, std::uint64_t seed);

// left(x,y) = tex(x,y), right(x,y) = tex(x+shift,y): a rectified pair whose
// true disparity is exactly `shift` everywhere (tex must be wider by shift).
struct StereoPair {
  GrayImage left;
  GrayImage right;
};
StereoPair shifted_pair(int width, int height, int shift, std::uint64_t seed);

// Fresh empty directory under the system temp root; wiped if it exists.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace testsupport
