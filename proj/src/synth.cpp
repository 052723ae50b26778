#include "posekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "posekit/camera.hpp"
#include "posekit/error.hpp"
#include "posekit/png_io.hpp"
#include "posekit/renderer.hpp"
#include "posekit/rng.hpp"
#include "posekit/scene.hpp"
#include "posekit/transform.hpp"

namespace posekit {

using nlohmann::json;

namespace {

constexpr int kPoseRetries = 100;
constexpr double kFrustumMarginPx = 2.0;
constexpr double kMinRenderZ = 2.0;  // mm, keep occluders past the near plane

std::string box_to_string(const Vec3& lo, const Vec3& hi) {
  auto f = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  return "[" + f(lo.x()) + "," + f(lo.y()) + "," + f(lo.z()) + "]..[" + f(hi.x()) + "," +
         f(hi.y()) + "," + f(hi.z()) + "]";
}

bool fully_in_frustum(const TriangleMesh& mesh, const RigidTransform& pose,
                      const CameraIntrinsics& intr) {
  for (const Vec3& v : mesh.vertices) {
    const Vec3 p = pose.apply(v);
    const auto uv = project(intr, p);
    if (!uv) return false;
    if (uv->x() < kFrustumMarginPx || uv->x() > intr.width - kFrustumMarginPx ||
        uv->y() < kFrustumMarginPx || uv->y() > intr.height - kFrustumMarginPx) {
      return false;
    }
  }
  return true;
}

TriangleMesh scaled_mesh(const TriangleMesh& m, double s) {
  TriangleMesh out = m;
  for (Vec3& v : out.vertices) v *= s;
  return out;
}

struct PlacedOccluder {
  TriangleMesh mesh;
  RigidTransform pose;
};

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void SynthParams::validate() const {
  if (n_frames < 1) throw ValidationError("SynthParams.n_frames must be >= 1");
  if (width < 1 || height < 1) throw ValidationError("SynthParams resolution must be positive");
  if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("SynthParams focal lengths must be > 0");
  if (!(baseline_mm > 0.0)) throw ValidationError("SynthParams.baseline_mm must be > 0");
  for (int i = 0; i < 3; ++i) {
    if (!(t_min[i] <= t_max[i])) {
      throw ValidationError("SynthParams translation box is empty on axis " + std::to_string(i));
    }
  }
  if (!(t_min.z() > 0.0)) throw ValidationError("SynthParams translation box must be in front");
  if (n_occluders < 0) throw ValidationError("SynthParams.n_occluders must be >= 0");
  if (!(occ_scale_min > 0.0) || !(occ_scale_max >= occ_scale_min)) {
    throw ValidationError("SynthParams occluder scale range is empty");
  }
  if (!(occ_min_overlap >= 0.0) || !(occ_min_overlap <= 1.0)) {
    throw ValidationError("SynthParams.occ_min_overlap must be in [0, 1]");
  }
  if (!(occ_clearance_mm > 0.0)) throw ValidationError("SynthParams.occ_clearance_mm must be > 0");
  if (!(noise_sigma_mm >= 0.0)) throw ValidationError("SynthParams.noise_sigma_mm must be >= 0");
  if (!(dropout_prob >= 0.0) || !(dropout_prob <= 1.0)) {
    throw ValidationError("SynthParams.dropout_prob must be in [0, 1]");
  }
}

void generate_synthetic(const TriangleMesh& mesh, std::span<const TriangleMesh> occluder_meshes,
                        const SynthParams& params, const std::filesystem::path& out_dir) {
  params.validate();
  mesh.validate();
  for (const auto& occ : occluder_meshes) occ.validate();
  if (params.n_occluders > 0 && occluder_meshes.empty()) {
    throw ValidationError("generate_synthetic: n_occluders > 0 but no occluder meshes given");
  }

  CameraIntrinsics intr;
  intr.fx = params.fx;
  intr.fy = params.fy;
  intr.cx = params.cx;
  intr.cy = params.cy;
  intr.width = params.width;
  intr.height = params.height;
  intr.validate();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  json cam_json = json::object();
  json gt_json = json::object();

  for (int frame = 0; frame < params.n_frames; ++frame) {
    Rng rng = Rng::for_frame(params.seed, static_cast<std::uint64_t>(frame));

    RigidTransform tool_pose;
    bool placed = false;
    for (int attempt = 0; attempt < kPoseRetries; ++attempt) {
      tool_pose.rotation = rng.random_rotation();
      tool_pose.translation = rng.uniform_in_box(params.t_min, params.t_max);
      if (fully_in_frustum(mesh, tool_pose, intr)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw ValidationError(
          "generate_synthetic: frame " + std::to_string(frame) + ": no fully in-frustum pose in " +
          std::to_string(kPoseRetries) + " tries; translation box " +
          box_to_string(params.t_min, params.t_max) + " at " + std::to_string(params.width) + "x" +
          std::to_string(params.height) + ", fx " + std::to_string(params.fx));
    }

    const RenderOutput tool_render = render_depth(mesh, tool_pose, intr);
    const BinaryMask& mask_full = tool_render.mask;
    const double mask_full_count = static_cast<double>(mask_full.count());

    double tool_min_z = params.t_max.z() + 1e9;
    for (const Vec3& v : mesh.vertices) {
      tool_min_z = std::min(tool_min_z, tool_pose.apply(v).z());
    }

    // Occluders go fully in front of the tool (depth gap >= occ_clearance_mm)
    // on the line of sight of a random tool vertex, re-sampled until they
    // cover the required fraction of the tool's mask.
    std::vector<PlacedOccluder> occluders;
    occluders.reserve(static_cast<std::size_t>(params.n_occluders));
    for (int k = 0; k < params.n_occluders; ++k) {
      const TriangleMesh& base = occluder_meshes[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(occluder_meshes.size()) - 1))];
      bool accepted = false;
      for (int attempt = 0; attempt < kPoseRetries && !accepted; ++attempt) {
        const double s = rng.uniform(params.occ_scale_min, params.occ_scale_max);
        TriangleMesh occ = scaled_mesh(base, s);
        const Vec3 center = occ.centroid();
        double radius = 0.0;
        for (const Vec3& v : occ.vertices) radius = std::max(radius, (v - center).norm());

        const double center_z = tool_min_z - params.occ_clearance_mm - radius;
        if (center_z - radius < kMinRenderZ) {
          continue;  // this scale draw cannot clear the near plane; try again
        }

        const Vec3 aim = tool_pose.apply(mesh.vertices[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(mesh.vertices.size()) - 1))]);
        RigidTransform occ_pose;
        occ_pose.rotation = rng.random_rotation();
        const Vec3 target(aim.x() * center_z / aim.z(), aim.y() * center_z / aim.z(), center_z);
        occ_pose.translation = target - occ_pose.rotation * center;

        const RenderOutput occ_render = render_depth(occ, occ_pose, intr);
        std::size_t overlap = 0;
        for (std::size_t i = 0; i < mask_full.bits.size(); ++i) {
          if (mask_full.bits[i] && occ_render.mask.bits[i]) ++overlap;
        }
        if (static_cast<double>(overlap) >= params.occ_min_overlap * mask_full_count) {
          occluders.push_back({std::move(occ), occ_pose});
          accepted = true;
        }
      }
      if (!accepted) {
        throw ValidationError(
            "generate_synthetic: frame " + std::to_string(frame) + ": occluder " +
            std::to_string(k) + " never reached overlap " + std::to_string(params.occ_min_overlap) +
            " of the tool mask in " + std::to_string(kPoseRetries) + " tries (scale range " +
            std::to_string(params.occ_scale_min) + ".." + std::to_string(params.occ_scale_max) +
            ", clearance " + std::to_string(params.occ_clearance_mm) + " mm)");
      }
    }

    std::vector<MeshInstance> scene;
    scene.reserve(1 + occluders.size());
    scene.push_back({&mesh, tool_pose});
    for (const PlacedOccluder& o : occluders) scene.push_back({&o.mesh, o.pose});

    const SceneRender joint = render_scene(scene, intr);
    BinaryMask mask_visib(intr.width, intr.height);
    for (std::size_t i = 0; i < mask_visib.bits.size(); ++i) {
      mask_visib.bits[i] = joint.winner[i] == 0 ? 1 : 0;
    }

    DepthMap depth = joint.depth;
    if (params.noise_sigma_mm > 0.0 || params.dropout_prob > 0.0) {
      for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
          if (!depth.is_valid(x, y)) continue;
          const double n = rng.normal(params.noise_sigma_mm);
          const double u = rng.uniform();
          if (u < params.dropout_prob) {
            depth.invalidate(x, y);
            continue;
          }
          const double z = depth.at(x, y) + n;
          if (z < kDepthPngScale) {
            depth.invalidate(x, y);
          } else {
            depth.set(x, y, z);
          }
        }
      }
    }

    const std::string name = frame_name(frame);
    save_depth_png(out_dir / "depth" / (name + ".png"), depth, kDepthPngScale);
    save_mask_png(out_dir / "mask_visib" / (name + ".png"), mask_visib);
    save_mask_png(out_dir / "mask_full" / (name + ".png"), mask_full);

    const std::string key = std::to_string(frame);
    json cam;
    cam["fx"] = params.fx;
    cam["fy"] = params.fy;
    cam["cx"] = params.cx;
    cam["cy"] = params.cy;
    cam["width"] = params.width;
    cam["height"] = params.height;
    cam["baseline_mm"] = params.baseline_mm;
    cam["depth_scale"] = kDepthPngScale;
    cam_json[key] = std::move(cam);

    json gt;
    json rot = json::array();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) rot.push_back(tool_pose.rotation(i, j));
    }
    gt["cam_R_m2c"] = std::move(rot);
    gt["cam_t_m2c"] = {tool_pose.translation.x(), tool_pose.translation.y(),
                       tool_pose.translation.z()};
    gt["obj_id"] = 1;
    gt_json[key] = json::array({std::move(gt)});
  }

  write_json_file(out_dir / "scene_camera.json", cam_json);
  write_json_file(out_dir / "scene_gt.json", gt_json);
}

}  // namespace posekit
