#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "posekit/mesh.hpp"
#include "posekit/types.hpp"

namespace posekit {

// Synthetic scene generation: the tool at seeded random in-frustum poses,
// optional occluders strictly in front of it, Gaussian depth noise and
// dropout, written in the scene directory layout. Byte-identical output for
// identical params; every frame draws from its own (seed, frame_id) stream.

struct SynthParams {
  int n_frames = 50;
  int width = 960;
  int height = 540;
  double fx = 700.0;
  double fy = 700.0;
  double cx = 480.0;
  double cy = 270.0;
  double baseline_mm = 5.0;

  Vec3 t_min{-40.0, -25.0, 180.0};  // translation box, mm
  Vec3 t_max{40.0, 25.0, 260.0};    // rotations are uniform over SO(3)

  int n_occluders = 0;
  double occ_scale_min = 0.6;
  double occ_scale_max = 1.2;
  double occ_min_overlap = 0.2;      // of the tool's full mask
  double occ_clearance_mm = 10.0;    // occluder-to-tool depth gap, at least

  double noise_sigma_mm = 0.0;
  double dropout_prob = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// occluder_meshes may be empty iff n_occluders is 0. Throws ValidationError
// when pose sampling fails after bounded retries (the message reports the
// configured ranges) and IoError on write failures.
void generate_synthetic(const TriangleMesh& mesh, std::span<const TriangleMesh> occluder_meshes,
                        const SynthParams& params, const std::filesystem::path& out_dir);

}  // namespace posekit
