#include "posekit/scene.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "posekit/error.hpp"

namespace posekit {

using nlohmann::json;

std::string frame_name(int frame_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", frame_id);
  return buf;
}

namespace {

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("missing file: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double need_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ValidationError(where + "." + key + ": expected a number");
  }
  return obj[key].get<double>();
}

std::vector<double> need_array(const json& obj, const std::string& where,
                               const std::string& key, std::size_t n) {
  if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != n) {
    throw ValidationError(where + "." + key + ": expected an array of " + std::to_string(n) +
                          " numbers");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      throw ValidationError(where + "." + key + ": expected an array of " + std::to_string(n) +
                            " numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

int parse_frame_key(const std::string& key, const std::string& file) {
  try {
    std::size_t used = 0;
    const int id = std::stoi(key, &used);
    if (used != key.size() || id < 0) throw std::invalid_argument(key);
    return id;
  } catch (const std::exception&) {
    throw ValidationError(file + ": frame key \"" + key + "\" is not a nonnegative integer");
  }
}

std::filesystem::path optional_file(const std::filesystem::path& dir, const char* sub,
                                    const std::string& name, const char* ext) {
  const auto p = dir / sub / (name + ext);
  return std::filesystem::exists(p) ? p : std::filesystem::path();
}

}  // namespace

std::vector<SceneFrame> load_scene(const std::filesystem::path& dir) {
  const json cams = load_json_file(dir / "scene_camera.json");
  const json gts = load_json_file(dir / "scene_gt.json");
  if (!cams.is_object()) throw ValidationError("scene_camera.json: expected an object");
  if (!gts.is_object()) throw ValidationError("scene_gt.json: expected an object");

  std::vector<SceneFrame> frames;
  for (const auto& [key, cam] : cams.items()) {
    const int id = parse_frame_key(key, "scene_camera.json");
    const std::string cam_where = "scene_camera.json[\"" + key + "\"]";
    if (!cam.is_object()) throw ValidationError(cam_where + ": expected an object");
    if (!gts.contains(key)) {
      throw ValidationError("scene_gt.json: missing frame \"" + key + "\"");
    }

    SceneFrame f;
    f.frame_id = id;
    f.camera.intrinsics.fx = need_number(cam, cam_where, "fx");
    f.camera.intrinsics.fy = need_number(cam, cam_where, "fy");
    f.camera.intrinsics.cx = need_number(cam, cam_where, "cx");
    f.camera.intrinsics.cy = need_number(cam, cam_where, "cy");
    f.camera.intrinsics.width = static_cast<int>(need_number(cam, cam_where, "width"));
    f.camera.intrinsics.height = static_cast<int>(need_number(cam, cam_where, "height"));
    f.camera.baseline_mm = need_number(cam, cam_where, "baseline_mm");
    f.depth_scale = need_number(cam, cam_where, "depth_scale");
    try {
      f.camera.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(cam_where + ": " + e.what());
    }
    if (!(f.depth_scale > 0.0)) {
      throw ValidationError(cam_where + ".depth_scale: must be > 0");
    }

    const std::string gt_where = "scene_gt.json[\"" + key + "\"]";
    const json& gt_list = gts[key];
    if (!gt_list.is_array() || gt_list.size() != 1) {
      throw ValidationError(gt_where + ": expected exactly one instance, got " +
                            (gt_list.is_array() ? std::to_string(gt_list.size())
                                                : std::string("a non-array")));
    }
    const json& gt = gt_list[0];
    const auto r = need_array(gt, gt_where + "[0]", "cam_R_m2c", 9);
    const auto t = need_array(gt, gt_where + "[0]", "cam_t_m2c", 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) f.gt_pose.rotation(i, j) = r[static_cast<std::size_t>(3 * i + j)];
      f.gt_pose.translation[i] = t[static_cast<std::size_t>(i)];
    }
    try {
      f.gt_pose.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(gt_where + "[0].cam_R_m2c: " + e.what());
    }
    if (gt.contains("obj_id")) {
      f.object_id = static_cast<int>(need_number(gt, gt_where + "[0]", "obj_id"));
    }

    const std::string name = frame_name(id);
    f.depth_path = dir / "depth" / (name + ".png");
    if (!std::filesystem::exists(f.depth_path)) {
      throw IoError("missing referenced file: " + f.depth_path.string());
    }
    f.mask_visib_path = optional_file(dir, "mask_visib", name, ".png");
    f.mask_full_path = optional_file(dir, "mask_full", name, ".png");
    f.disparity_path = optional_file(dir, "disparity", name, ".pfm");
    f.left_path = optional_file(dir, "rgb_left", name, ".png");
    f.right_path = optional_file(dir, "rgb_right", name, ".png");
    frames.push_back(std::move(f));
  }

  for (const auto& [key, unused] : gts.items()) {
    if (!cams.contains(key)) {
      throw ValidationError("scene_camera.json: missing frame \"" + key + "\"");
    }
  }

  std::sort(frames.begin(), frames.end(),
            [](const SceneFrame& a, const SceneFrame& b) { return a.frame_id < b.frame_id; });
  return frames;
}

bool PoseResult::operator==(const PoseResult& other) const {
  if (frame_id != other.frame_id || status != other.status) return false;
  if (status != "ok") return true;
  return pose.rotation == other.pose.rotation && pose.translation == other.pose.translation &&
         score == other.score && n_icp_iters == other.n_icp_iters &&
         inlier_fraction == other.inlier_fraction;
}

void write_results(const std::filesystem::path& path, std::span<const PoseResult> results) {
  json arr = json::array();
  for (const PoseResult& r : results) {
    json item;
    item["frame_id"] = r.frame_id;
    item["status"] = r.status;
    if (r.ok()) {
      json rot = json::array();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) rot.push_back(r.pose.rotation(i, j));
      }
      item["R"] = std::move(rot);
      item["t"] = {r.pose.translation.x(), r.pose.translation.y(), r.pose.translation.z()};
      item["score"] = r.score;
      item["n_icp_iters"] = r.n_icp_iters;
      item["inlier_fraction"] = r.inlier_fraction;
    }
    arr.push_back(std::move(item));
  }
  if (!path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << arr.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<PoseResult> load_results(const std::filesystem::path& path) {
  const json arr = load_json_file(path);
  if (!arr.is_array()) {
    throw ValidationError(path.string() + ": expected a JSON array");
  }
  std::vector<PoseResult> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& item = arr[i];
    const std::string where = path.filename().string() + "[" + std::to_string(i) + "]";
    if (!item.is_object()) throw ValidationError(where + ": expected an object");
    PoseResult r;
    r.frame_id = static_cast<int>(need_number(item, where, "frame_id"));
    if (!item.contains("status") || !item["status"].is_string()) {
      throw ValidationError(where + ".status: expected a string");
    }
    r.status = item["status"].get<std::string>();
    if (r.status != "ok" && r.status != "failed") {
      throw ValidationError(where + ".status: expected \"ok\" or \"failed\", got \"" +
                            r.status + "\"");
    }
    if (r.ok()) {
      const auto rot = need_array(item, where, "R", 9);
      const auto t = need_array(item, where, "t", 3);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          r.pose.rotation(a, b) = rot[static_cast<std::size_t>(3 * a + b)];
        }
        r.pose.translation[a] = t[static_cast<std::size_t>(a)];
      }
      try {
        r.pose.validate();
      } catch (const ValidationError& e) {
        throw ValidationError(where + ".R: " + e.what());
      }
      r.score = need_number(item, where, "score");
      r.n_icp_iters = static_cast<int>(need_number(item, where, "n_icp_iters"));
      r.inlier_fraction = need_number(item, where, "inlier_fraction");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace posekit
