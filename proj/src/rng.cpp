#include "posekit/rng.hpp"

#include <cmath>

namespace posekit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

Rng Rng::for_frame(std::uint64_t seed, std::uint64_t frame_id) {
  return Rng(splitmix64(seed) ^ splitmix64(frame_id * 0x2545f4914f6cdd1dull + 1));
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return lo + static_cast<int>(v % span);
}

double Rng::normal(double sigma) {
  // Box-Muller; the second variate is discarded so the stream layout does
  // not depend on call parity.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Vec3 Rng::uniform_in_box(const Vec3& lo, const Vec3& hi) {
  const double x = uniform(lo.x(), hi.x());
  const double y = uniform(lo.y(), hi.y());
  const double z = uniform(lo.z(), hi.z());
  return {x, y, z};
}

Mat3 Rng::random_rotation() {
  // Shoemake's uniform quaternion construction.
  const double u1 = uniform();
  const double u2 = uniform();
  const double u3 = uniform();
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double qw = a * std::sin(two_pi * u2);
  const double qx = a * std::cos(two_pi * u2);
  const double qy = b * std::sin(two_pi * u3);
  const double qz = b * std::cos(two_pi * u3);
  Mat3 r;
  r << 1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw),
      2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw),
      2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy);
  return r;
}

}  // namespace posekit
