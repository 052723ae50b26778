#include "posekit/transform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace posekit {

RigidTransform RigidTransform::inverse() const {
  RigidTransform out;
  out.rotation = rotation.transpose();
  out.translation = -(out.rotation * translation);
  return out;
}

bool RigidTransform::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const Mat3 gram = rotation.transpose() * rotation;
  if (((gram - Mat3::Identity()).cwiseAbs().maxCoeff()) > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

void RigidTransform::validate() const {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw ValidationError("pose: non-finite rotation or translation entry");
  }
  const Mat3 gram = rotation.transpose() * rotation;
  const double ortho_err = (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > kRotationTolerance) {
    throw ValidationError("pose: rotation not orthonormal (max |R^T R - I| = " +
                          std::to_string(ortho_err) + ")");
  }
  const double det = rotation.determinant();
  if (std::abs(det - 1.0) > kRotationTolerance) {
    throw ValidationError("pose: rotation determinant " + std::to_string(det) +
                          " is not +1");
  }
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  if (!out.is_valid(kRotationTolerance)) {
    out.rotation = orthonormalize(out.rotation);
  }
  return out;
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

double rotation_angle(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

double rotation_distance(const Mat3& a, const Mat3& b) {
  return rotation_angle(a * b.transpose());
}

Mat3 rot_x(double t) {
  Mat3 r;
  r << 1, 0, 0, 0, std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t);
  return r;
}

Mat3 rot_y(double t) {
  Mat3 r;
  r << std::cos(t), 0, std::sin(t), 0, 1, 0, -std::sin(t), 0, std::cos(t);
  return r;
}

Mat3 rot_z(double t) {
  Mat3 r;
  r << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
  return r;
}

Mat3 axis_angle(const Vec3& axis, double radians) {
  const Vec3 u = axis.normalized();
  return Eigen::AngleAxisd(radians, u).toRotationMatrix();
}

}  // namespace posekit
