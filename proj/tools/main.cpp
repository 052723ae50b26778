#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posekit/error.hpp"
#include "posekit/estimator.hpp"
#include "posekit/mesh.hpp"
#include "posekit/png_io.hpp"
#include "posekit/pose_metrics.hpp"
#include "posekit/pseudo_label.hpp"
#include "posekit/scene.hpp"
#include "posekit/seg_metrics.hpp"
#include "posekit/stereo.hpp"
#include "posekit/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace posekit;

namespace {

StereoRig load_rig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  auto need = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw ValidationError(path.string() + ": missing numeric field \"" + key + "\"");
    }
    return j[key].get<double>();
  };
  StereoRig rig;
  rig.intrinsics.fx = need("fx");
  rig.intrinsics.fy = need("fy");
  rig.intrinsics.cx = need("cx");
  rig.intrinsics.cy = need("cy");
  rig.intrinsics.width = static_cast<int>(need("width"));
  rig.intrinsics.height = static_cast<int>(need("height"));
  rig.baseline_mm = need("baseline_mm");
  rig.validate();
  return rig;
}

void write_json_file(const fs::path& path, const json& j) {
  if (!path.parent_path().empty()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------- depth ----

struct DepthArgs {
  std::string left, right, rig, out;
  std::string pfm_out, disparity_in;
  MatcherParams matcher;
  double min_disparity_floor = kDefaultMinDisparityFloor;
};

void run_depth(const DepthArgs& a) {
  const StereoRig rig = load_rig(a.rig);

  DisparityMap disp;
  if (!a.disparity_in.empty()) {
    disp = load_disparity_pfm(a.disparity_in);
    require_same_size(disp.width, disp.height, rig.intrinsics.width, rig.intrinsics.height,
                      "depth (disparity vs rig)");
  } else {
    if (a.left.empty() || a.right.empty()) {
      throw ValidationError("depth: left and right images are required unless --disparity-in "
                            "is given");
    }
    const GrayImage left = load_gray_png(a.left);
    const GrayImage right = load_gray_png(a.right);
    require_same_size(left.width, left.height, right.width, right.height,
                      "depth (left vs right)");
    require_same_size(left.width, left.height, rig.intrinsics.width, rig.intrinsics.height,
                      "depth (image vs rig)");
    disp = match_block(left, right, a.matcher);
  }

  const DepthMap depth = disparity_to_depth(disp, rig, a.min_disparity_floor);
  save_depth_png(a.out, depth, kDepthPngScale);
  if (!a.pfm_out.empty()) save_disparity_pfm(disp, a.pfm_out);

  const std::size_t total = depth.value.size();
  const std::size_t valid = depth.valid_count();
  std::printf("depth: %zu / %zu valid pixels (%.1f%%) -> %s\n", valid, total,
              total ? 100.0 * static_cast<double>(valid) / static_cast<double>(total) : 0.0,
              a.out.c_str());
}

// ----------------------------------------------------------- pseudomask ----

struct PseudoArgs {
  std::string scene_dir, mesh, out_dir;
  double epsilon = 1.0;
};

void run_pseudomask(const PseudoArgs& a) {
  const auto frames = load_scene(a.scene_dir);
  const TriangleMesh mesh = load_mesh(a.mesh);
  const fs::path out_dir =
      a.out_dir.empty() ? fs::path(a.scene_dir) / "mask_pseudo" : fs::path(a.out_dir);

  PseudoLabelParams params;
  params.epsilon_mm = a.epsilon;

  json report = json::object();
  std::int64_t retained_total = 0, projected_total = 0;
  for (const SceneFrame& f : frames) {
    const DepthMap depth = load_depth_png(f.depth_path, f.depth_scale);
    const PseudoLabelResult res =
        generate_pseudo_mask(mesh, f.gt_pose, f.camera.intrinsics, depth, params);
    save_mask_png(out_dir / (frame_name(f.frame_id) + ".png"), res.mask);
    json r;
    r["projected_pixels"] = res.report.projected_pixels;
    r["retained_pixels"] = res.report.retained_pixels;
    r["rejected_occluded"] = res.report.rejected_occluded;
    r["rejected_no_depth"] = res.report.rejected_no_depth;
    report[frame_name(f.frame_id)] = std::move(r);
    retained_total += res.report.retained_pixels;
    projected_total += res.report.projected_pixels;
  }
  write_json_file(out_dir / "report.json", report);
  std::printf("pseudomask: %zu frames, retained %lld of %lld projected pixels -> %s\n",
              frames.size(), static_cast<long long>(retained_total),
              static_cast<long long>(projected_total), out_dir.string().c_str());
}

// ------------------------------------------------------------- estimate ----

struct EstimateArgs {
  std::string scene_dir, mesh, out;
  std::string mask_source = "file";
  std::string mask_dir;
  double epsilon = 1.0;
  EstimatorParams params;
};

void run_estimate(const EstimateArgs& a) {
  const auto frames = load_scene(a.scene_dir);
  const TriangleMesh mesh = load_mesh(a.mesh);

  std::vector<PoseResult> results;
  for (const SceneFrame& f : frames) {
    const DepthMap depth = load_depth_png(f.depth_path, f.depth_scale);

    BinaryMask mask;
    if (a.mask_source == "file") {
      fs::path mask_path = a.mask_dir.empty()
                               ? (f.mask_visib_path.empty()
                                      ? fs::path(a.scene_dir) / "mask_visib" /
                                            (frame_name(f.frame_id) + ".png")
                                      : f.mask_visib_path)
                               : fs::path(a.mask_dir) / (frame_name(f.frame_id) + ".png");
      mask = load_mask_png(mask_path);  // missing file is a configuration error
    } else {
      PseudoLabelParams pl;
      pl.epsilon_mm = a.epsilon;
      mask = generate_pseudo_mask(mesh, f.gt_pose, f.camera.intrinsics, depth, pl).mask;
    }

    PoseResult r;
    r.frame_id = f.frame_id;
    try {
      const EstimateResult est = estimate_pose(mesh, f.camera.intrinsics, depth, mask, a.params);
      r.pose = est.pose;
      r.score = est.score;
      r.n_icp_iters = est.n_icp_iters;
      r.inlier_fraction = est.inlier_fraction;
      std::printf("frame %s: score %.4f, %d icp iters, inliers %.3f\n",
                  frame_name(f.frame_id).c_str(), est.score, est.n_icp_iters,
                  est.inlier_fraction);
    } catch (const Error& e) {
      r.status = "failed";
      std::printf("frame %s: failed (%s)\n", frame_name(f.frame_id).c_str(), e.what());
    }
    results.push_back(std::move(r));
  }
  write_results(a.out, results);
  const auto failed =
      std::count_if(results.begin(), results.end(), [](const PoseResult& r) { return !r.ok(); });
  std::printf("estimate: %zu frames, %lld failed -> %s\n", results.size(),
              static_cast<long long>(failed), a.out.c_str());
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string scene_dir, results, mesh;
  std::string report = "table";
  std::string json_out;
};

void run_eval(const EvalArgs& a) {
  const auto frames = load_scene(a.scene_dir);
  const auto results = load_results(a.results);
  const TriangleMesh mesh = load_mesh(a.mesh);

  std::map<int, const SceneFrame*> by_id;
  for (const SceneFrame& f : frames) by_id[f.frame_id] = &f;

  std::vector<int> unknown;
  for (const PoseResult& r : results) {
    if (!by_id.count(r.frame_id)) unknown.push_back(r.frame_id);
  }
  if (!unknown.empty()) {
    std::string ids;
    for (const int id : unknown) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    throw ValidationError("eval: results reference frame ids missing from the scene: " + ids);
  }

  std::vector<PoseMetricRecord> records;
  int n_failed = 0, n_behind = 0;
  for (const PoseResult& r : results) {
    if (!r.ok()) {
      ++n_failed;
      continue;
    }
    const SceneFrame& f = *by_id[r.frame_id];
    PoseMetricRecord rec;
    rec.frame_id = r.frame_id;
    rec.add_mm = add_metric(mesh, f.gt_pose, r.pose);
    try {
      rec.proj_px = projection_metric(mesh, f.gt_pose, r.pose, f.camera.intrinsics);
    } catch (const ValidationError&) {
      ++n_behind;  // behind-camera projections are excluded, not astronomical
      continue;
    }
    records.push_back(rec);
  }
  if (records.empty()) {
    throw ValidationError("eval: no evaluable frames (" + std::to_string(n_failed) +
                          " failed, " + std::to_string(n_behind) + " behind-camera)");
  }
  const PoseMetricSummary s = summarize_pose(records);

  json out;
  out["n_frames"] = s.n_frames;
  out["n_failed"] = n_failed;
  out["n_behind_camera_excluded"] = n_behind;
  out["recall_add_1mm"] = s.recalls_add[0];
  out["recall_add_2_5mm"] = s.recalls_add[1];
  out["recall_add_5mm"] = s.recalls_add[2];
  out["recall_proj_5px"] = s.recalls_proj[0];
  out["recall_proj_20px"] = s.recalls_proj[1];
  out["recall_proj_50px"] = s.recalls_proj[2];
  out["mean_add_mm"] = s.mean_add;
  out["std_add_mm"] = s.std_add;  // population standard deviation
  out["mean_proj_px"] = s.mean_proj;
  out["std_proj_px"] = s.std_proj;

  if (a.report == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%-14s %8s %8s %8s %10s %10s\n", "ADD (mm)", "<1.0", "<2.5", "<5.0", "mu",
                "sigma");
    std::printf("%-14s %8.4f %8.4f %8.4f %10.4f %10.4f\n", "", s.recalls_add[0],
                s.recalls_add[1], s.recalls_add[2], s.mean_add, s.std_add);
    std::printf("%-14s %8s %8s %8s %10s %10s\n", "Proj (px)", "<5", "<20", "<50", "mu", "sigma");
    std::printf("%-14s %8.4f %8.4f %8.4f %10.4f %10.4f\n", "", s.recalls_proj[0],
                s.recalls_proj[1], s.recalls_proj[2], s.mean_proj, s.std_proj);
    std::printf("frames: %d evaluated, %d failed, %d behind-camera excluded (sigma is the "
                "population standard deviation)\n",
                s.n_frames, n_failed, n_behind);
  }
  if (!a.json_out.empty()) write_json_file(a.json_out, out);
}

// ------------------------------------------------------------- eval-seg ----

struct EvalSegArgs {
  std::string pred_dir, gt_dir, confidences;
  std::string report = "table";
  std::string json_out;
};

// "000012.png" or "000012_003.png" -> frame 12; anything else is skipped.
bool parse_instance_name(const std::string& stem, int& frame_id) {
  const auto us = stem.find('_');
  const std::string head = us == std::string::npos ? stem : stem.substr(0, us);
  const std::string tail = us == std::string::npos ? "" : stem.substr(us + 1);
  if (head.empty() || !std::all_of(head.begin(), head.end(), ::isdigit)) return false;
  if (us != std::string::npos &&
      (tail.empty() || !std::all_of(tail.begin(), tail.end(), ::isdigit))) {
    return false;
  }
  frame_id = std::stoi(head);
  return true;
}

std::map<int, std::vector<fs::path>> list_instances(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<int, std::vector<fs::path>> by_frame;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    int frame_id = 0;
    if (parse_instance_name(p.stem().string(), frame_id)) by_frame[frame_id].push_back(p);
  }
  return by_frame;
}

void run_eval_seg(const EvalSegArgs& a) {
  std::ifstream in(a.confidences);
  if (!in) throw IoError("missing file: " + a.confidences);
  json conf;
  try {
    conf = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(a.confidences + ": " + e.what());
  }
  if (!conf.is_object()) {
    throw ValidationError(a.confidences + ": expected an object mapping file stems to "
                          "confidences");
  }

  const auto gt_files = list_instances(a.gt_dir);
  const auto pred_files = list_instances(a.pred_dir);

  std::string misaligned;
  for (const auto& [frame_id, unused] : pred_files) {
    if (!gt_files.count(frame_id)) {
      misaligned += (misaligned.empty() ? "" : ", ") + std::to_string(frame_id);
    }
  }
  if (!misaligned.empty()) {
    throw ValidationError("eval-seg: prediction frames with no ground-truth counterpart: " +
                          misaligned);
  }

  std::vector<SegFrame> seg_frames;
  for (const auto& [frame_id, gts] : gt_files) {
    SegFrame frame;
    for (const auto& p : gts) frame.gts.push_back(load_mask_png(p));
    const auto it = pred_files.find(frame_id);
    if (it != pred_files.end()) {
      for (const auto& p : it->second) {
        const std::string stem = p.stem().string();
        if (!conf.contains(stem) || !conf[stem].is_number()) {
          throw ValidationError(a.confidences + ": missing numeric confidence for \"" + stem +
                                "\"");
        }
        frame.predictions.push_back({load_mask_png(p), conf[stem].get<double>()});
      }
    }
    seg_frames.push_back(std::move(frame));
  }

  const SegMetricSummary s = seg_ap_ar(seg_frames);
  json out;
  out["ap_5095"] = s.ap_5095;
  out["ap_small"] = s.ap_small;
  out["ap_medium"] = s.ap_medium;
  out["ap_large"] = s.ap_large;
  out["ar_5095"] = s.ar_5095;

  if (a.report == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%-22s %8.4f\n", "AP@[IoU=0.50:0.95]", s.ap_5095);
    std::printf("%-22s %8.4f\n", "AP_small", s.ap_small);
    std::printf("%-22s %8.4f\n", "AP_medium", s.ap_medium);
    std::printf("%-22s %8.4f\n", "AP_large", s.ap_large);
    std::printf("%-22s %8.4f\n", "AR@[IoU=0.50:0.95]", s.ar_5095);
  }
  if (!a.json_out.empty()) write_json_file(a.json_out, out);
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string mesh, out_dir;
  std::vector<std::string> occluders;
  std::vector<double> t_min{-40.0, -25.0, 180.0};
  std::vector<double> t_max{40.0, 25.0, 260.0};
  SynthParams params;
};

void run_synth(const SynthArgs& a) {
  const TriangleMesh mesh = load_mesh(a.mesh);
  std::vector<TriangleMesh> occluders;
  occluders.reserve(a.occluders.size());
  for (const auto& p : a.occluders) occluders.push_back(load_mesh(p));

  SynthParams params = a.params;
  for (int i = 0; i < 3; ++i) {
    params.t_min[i] = a.t_min[static_cast<std::size_t>(i)];
    params.t_max[i] = a.t_max[static_cast<std::size_t>(i)];
  }
  generate_synthetic(mesh, occluders, params, a.out_dir);
  std::printf("synth: wrote %d frames to %s\n", params.n_frames, a.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posekit: stereo depth, depth-consistency pseudo-labels, render-and-compare "
               "pose estimation and evaluation for a single rigid tool"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  DepthArgs depth_args;
  auto* depth = app.add_subcommand("depth", "Match a rectified stereo pair and write a depth PNG");
  depth->add_option("left", depth_args.left, "left image PNG");
  depth->add_option("right", depth_args.right, "right image PNG");
  depth->add_option("--rig", depth_args.rig,
                    "rig JSON: fx, fy, cx, cy (px), width, height, baseline_mm")->required();
  depth->add_option("-o,--out", depth_args.out, "output depth PNG, 16-bit, 0.1 mm/unit")
      ->required();
  depth->add_option("--pfm", depth_args.pfm_out, "also write the disparity as PFM");
  depth->add_option("--disparity-in", depth_args.disparity_in,
                    "convert this PFM instead of matching; left/right unused");
  depth->add_option("--max-disparity", depth_args.matcher.max_disparity,
                    "search range in px (MatcherParams.max_disparity)");
  depth->add_option("--window", depth_args.matcher.window,
                    "odd ZNCC window edge in px (MatcherParams.window)");
  depth->add_option("--lr-tolerance", depth_args.matcher.lr_tolerance,
                    "left-right agreement bound in px (MatcherParams.lr_tolerance)");
  depth->add_option("--uniqueness-ratio", depth_args.matcher.uniqueness_ratio,
                    "best/second-best cost ratio gate (MatcherParams.uniqueness_ratio)");
  depth->add_option("--min-disparity-floor", depth_args.min_disparity_floor,
                    "disparities below this many px give no depth");
  depth->callback([&] { run_depth(depth_args); });

  PseudoArgs pseudo_args;
  auto* pseudo = app.add_subcommand(
      "pseudomask", "Depth-consistency pseudo-label masks for every frame of a scene");
  pseudo->add_option("scene_dir", pseudo_args.scene_dir, "scene directory")->required();
  pseudo->add_option("mesh", pseudo_args.mesh, "tool mesh (.ply/.obj, mm)")->required();
  pseudo->add_option("--epsilon", pseudo_args.epsilon,
                     "depth agreement threshold in mm (PseudoLabelParams.epsilon_mm)");
  pseudo->add_option("-o,--out-dir", pseudo_args.out_dir,
                     "mask output directory (default <scene_dir>/mask_pseudo)");
  pseudo->callback([&] { run_pseudomask(pseudo_args); });

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate", "Estimate the tool pose on every frame of a scene");
  est->add_option("scene_dir", est_args.scene_dir, "scene directory")->required();
  est->add_option("mesh", est_args.mesh, "tool mesh (.ply/.obj, mm)")->required();
  est->add_option("-o,--out", est_args.out, "results JSON")->required();
  est->add_option("--mask-source", est_args.mask_source,
                  "where masks come from: stored files or depth-consistency pseudo-labels")
      ->check(CLI::IsMember({"file", "pseudo"}));
  est->add_option("--mask-dir", est_args.mask_dir,
                  "mask directory for --mask-source file (default <scene_dir>/mask_visib)");
  est->add_option("--epsilon", est_args.epsilon,
                  "pseudo-label threshold in mm, --mask-source pseudo only");
  est->add_option("--n-viewpoints", est_args.params.n_viewpoints,
                  "icosphere viewpoints (EstimatorParams.n_viewpoints)");
  est->add_option("--n-inplane", est_args.params.n_inplane,
                  "in-plane rotations per viewpoint (EstimatorParams.n_inplane)");
  est->add_option("--score-tau", est_args.params.score_tau,
                  "depth agreement band in mm (EstimatorParams.score_tau)");
  est->add_option("--icp-max-iters", est_args.params.icp_max_iters,
                  "ICP iteration cap (EstimatorParams.icp_max_iters)");
  est->add_option("--icp-corr-dist", est_args.params.icp_corr_dist,
                  "ICP correspondence gate in mm (EstimatorParams.icp_corr_dist)");
  est->add_option("--icp-converge-tol", est_args.params.icp_converge_tol,
                  "ICP translation convergence in mm (EstimatorParams.icp_converge_tol)");
  est->add_option("--min-mask-pixels", est_args.params.min_mask_pixels,
                  "smallest usable mask (EstimatorParams.min_mask_pixels)");
  est->add_option("--seed", est_args.params.sample_seed,
                  "model surface sampling seed (EstimatorParams.sample_seed)");
  est->add_option("--jobs", est_args.params.jobs,
                  "hypothesis-scoring threads; results do not depend on it");
  est->callback([&] { run_estimate(est_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Pose metrics (ADD, 2D projection) for a results JSON");
  eval->add_option("scene_dir", eval_args.scene_dir, "scene directory with ground truth")
      ->required();
  eval->add_option("results", eval_args.results, "results JSON from estimate")->required();
  eval->add_option("mesh", eval_args.mesh, "tool mesh (.ply/.obj, mm)")->required();
  eval->add_option("--report", eval_args.report, "stdout format")
      ->check(CLI::IsMember({"table", "json"}));
  eval->add_option("-o,--json-out", eval_args.json_out, "also write the summary JSON here");
  eval->callback([&] { run_eval(eval_args); });

  EvalSegArgs seg_args;
  auto* seg = app.add_subcommand(
      "eval-seg", "Segmentation AP/AR over IoU 0.50:0.95 with size stratification");
  seg->add_option("pred_dir", seg_args.pred_dir,
                  "predicted masks, 000000.png or 000000_000.png per instance")->required();
  seg->add_option("gt_dir", seg_args.gt_dir, "ground-truth masks, same naming")->required();
  seg->add_option("--confidences", seg_args.confidences,
                  "JSON object: file stem -> confidence in [0,1]")->required();
  seg->add_option("--report", seg_args.report, "stdout format")
      ->check(CLI::IsMember({"table", "json"}));
  seg->add_option("-o,--json-out", seg_args.json_out, "also write the summary JSON here");
  seg->callback([&] { run_eval_seg(seg_args); });

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with known ground truth");
  synth->add_option("mesh", synth_args.mesh, "tool mesh (.ply/.obj, mm)")->required();
  synth->add_option("out_dir", synth_args.out_dir, "output scene directory")->required();
  synth->add_option("--occluder", synth_args.occluders, "occluder mesh, repeatable");
  synth->add_option("--n-frames", synth_args.params.n_frames, "frames to generate");
  synth->add_option("--width", synth_args.params.width, "image width in px");
  synth->add_option("--height", synth_args.params.height, "image height in px");
  synth->add_option("--fx", synth_args.params.fx, "focal length x in px");
  synth->add_option("--fy", synth_args.params.fy, "focal length y in px");
  synth->add_option("--cx", synth_args.params.cx, "principal point x in px");
  synth->add_option("--cy", synth_args.params.cy, "principal point y in px");
  synth->add_option("--baseline", synth_args.params.baseline_mm, "stereo baseline in mm");
  synth->add_option("--t-min", synth_args.t_min, "translation box lower corner, mm x y z")
      ->expected(3);
  synth->add_option("--t-max", synth_args.t_max, "translation box upper corner, mm x y z")
      ->expected(3);
  synth->add_option("--n-occluders", synth_args.params.n_occluders, "occluders per frame");
  synth->add_option("--occ-scale-min", synth_args.params.occ_scale_min,
                    "occluder scale range lower bound");
  synth->add_option("--occ-scale-max", synth_args.params.occ_scale_max,
                    "occluder scale range upper bound");
  synth->add_option("--occ-overlap", synth_args.params.occ_min_overlap,
                    "required occluder coverage of the tool mask, fraction");
  synth->add_option("--occ-clearance", synth_args.params.occ_clearance_mm,
                    "occluder-to-tool depth gap in mm");
  synth->add_option("--noise-sigma", synth_args.params.noise_sigma_mm,
                    "Gaussian depth noise sigma in mm");
  synth->add_option("--dropout", synth_args.params.dropout_prob,
                    "per-pixel depth dropout probability");
  synth->add_option("--seed", synth_args.params.seed, "generator seed");
  synth->callback([&] { run_synth(synth_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
