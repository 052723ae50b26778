#pragma once

#include "posekit/error.hpp"
#include "posekit/types.hpp"

namespace posekit {

// Tolerance for the SO(3) invariants: R^T R = I per entry and det R = +1.
inline constexpr double kRotationTolerance = 1e-9;

// SE(3) pose, x_out = rotation * x + translation. Translation in mm.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform inverse() const;

  bool is_valid(double tol = kRotationTolerance) const;
  void validate() const;  // throws ValidationError
};

// Applies b then a. Re-orthonormalizes if the product drifts past tolerance.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

// Nearest rotation matrix in Frobenius norm (via SVD), det forced to +1.
Mat3 orthonormalize(const Mat3& m);

// Geodesic angle of a rotation, radians in [0, pi].
double rotation_angle(const Mat3& r);

// Geodesic distance between two rotations, radians.
double rotation_distance(const Mat3& a, const Mat3& b);

Mat3 rot_x(double radians);
Mat3 rot_y(double radians);
Mat3 rot_z(double radians);
Mat3 axis_angle(const Vec3& axis, double radians);

inline double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

}  // namespace posekit
