#pragma once

#include <cstdint>
#include <random>

#include "posekit/types.hpp"

namespace posekit {

// Deterministic random stream. Samples are drawn from raw mt19937_64 output
// rather than <random> distributions, whose sequences are
// implementation-defined; every artifact the toolkit writes must be
// reproducible from a seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for one frame of a generated dataset.
  static Rng for_frame(std::uint64_t seed, std::uint64_t frame_id);

  std::uint64_t next_u64();

  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  int uniform_int(int lo, int hi);     // inclusive both ends
  double normal(double sigma);         // mean 0, Box-Muller
  Vec3 uniform_in_box(const Vec3& lo, const Vec3& hi);
  Mat3 random_rotation();              // uniform over SO(3)

 private:
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace posekit
