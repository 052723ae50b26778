#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "posekit/png_io.hpp"
#include "posekit/scene.hpp"
#include "posekit/stereo.hpp"
#include "support.hpp"

using namespace posekit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = std::string(CLI_BINARY) + " " + args;
  if (!capture.empty()) {
    cmd += " > " + capture.string() + " 2>&1";
  } else {
    cmd += " > /dev/null 2>&1";
  }
  const int status = std::system(cmd.c_str());
  return status < 0 ? status : WEXITSTATUS(status);
}

void save_obj(const fs::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

void write_rig(const fs::path& path) {
  std::ofstream out(path);
  out << R"({"fx": 300.0, "fy": 300.0, "cx": 160.0, "cy": 120.0,
             "width": 320, "height": 240, "baseline_mm": 5.0})";
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

double median_depth(const DepthMap& depth) {
  std::vector<double> vals;
  for (std::size_t i = 0; i < depth.value.size(); ++i) {
    if (depth.valid[i]) vals.push_back(depth.value[i]);
  }
  REQUIRE(!vals.empty());
  std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
  return vals[vals.size() / 2];
}

// Shared tool mesh on disk for subcommands that read meshes from files.
const fs::path& tool_obj() {
  static const fs::path path = [] {
    const auto dir = testsupport::temp_dir("cli_meshes");
    const auto p = dir / "tool.obj";
    save_obj(p, testsupport::make_plate_tool());
    save_obj(dir / "occ.obj", testsupport::make_cube(18.0));
    return p;
  }();
  return path;
}

fs::path occ_obj() { return tool_obj().parent_path() / "occ.obj"; }

const std::string kSmallCam =
    "--width 320 --height 240 --fx 300 --fy 300 --cx 160 --cy 120 "
    "--t-min 0 0 170 --t-max 20 12 240";

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help") == 0);
  for (const char* sub : {"depth", "pseudomask", "estimate", "eval", "eval-seg", "synth"}) {
    CHECK(run_cli(std::string(sub) + " --help") == 0);
  }
  CHECK(run_cli("") != 0);                 // subcommand required
  CHECK(run_cli("no-such-command") != 0);
  CHECK(run_cli("depth --rig x.json") != 0);  // missing required -o
  CHECK(run_cli("estimate") != 0);
  CHECK(run_cli("synth --bogus-flag a b") != 0);
}

TEST_CASE("depth: matches a shifted pair and reports metric depth") {
  const auto dir = testsupport::temp_dir("cli_depth");
  const int shift = 6;
  const auto pair = testsupport::shifted_pair(320, 240, shift, 81);
  save_gray_png(dir / "left.png", pair.left);
  save_gray_png(dir / "right.png", pair.right);
  write_rig(dir / "rig.json");

  const std::string cmd = (dir / "left.png").string() + " " + (dir / "right.png").string() +
                          " --rig " + (dir / "rig.json").string() + " -o " +
                          (dir / "depth.png").string() + " --pfm " + (dir / "disp.pfm").string();
  REQUIRE(run_cli("depth " + cmd) == 0);

  // Z = fx * B / d = 300 * 5 / 6 = 250 mm; subpixel slack of 0.25 px.
  const DepthMap depth = load_depth_png(dir / "depth.png");
  CHECK(median_depth(depth) >= 300.0 * 5.0 / 6.25 - 0.1);
  CHECK(median_depth(depth) <= 300.0 * 5.0 / 5.75 + 0.1);

  const DisparityMap disp = load_disparity_pfm(dir / "disp.pfm");
  CHECK(disp.valid_count() > 2000);

  // Identical rerun produces byte-identical outputs.
  const std::string bytes_a = read_bytes(dir / "depth.png");
  const std::string pfm_a = read_bytes(dir / "disp.pfm");
  REQUIRE(run_cli("depth " + cmd) == 0);
  CHECK(read_bytes(dir / "depth.png") == bytes_a);
  CHECK(read_bytes(dir / "disp.pfm") == pfm_a);
}

TEST_CASE("depth: dimension mismatch exits with a module error") {
  const auto dir = testsupport::temp_dir("cli_depth_bad");
  save_gray_png(dir / "left.png", testsupport::noise_texture(320, 240, 82));
  save_gray_png(dir / "right.png", testsupport::noise_texture(300, 240, 82));
  write_rig(dir / "rig.json");
  const auto log = dir / "log.txt";
  CHECK(run_cli("depth " + (dir / "left.png").string() + " " + (dir / "right.png").string() +
                    " --rig " + (dir / "rig.json").string() + " -o " +
                    (dir / "depth.png").string(),
                log) == 2);
  CHECK(read_bytes(log).find("dimension mismatch") != std::string::npos);
}

TEST_CASE("depth: --disparity-in bypasses matching") {
  const auto dir = testsupport::temp_dir("cli_depth_pfm");
  DisparityMap disp(320, 240);
  for (int y = 0; y < 240; ++y) {
    for (int x = 0; x < 320; ++x) disp.set(x, y, 10.0);
  }
  save_disparity_pfm(disp, dir / "in.pfm");
  write_rig(dir / "rig.json");
  REQUIRE(run_cli("depth --disparity-in " + (dir / "in.pfm").string() + " --rig " +
                  (dir / "rig.json").string() + " -o " + (dir / "depth.png").string()) == 0);
  const DepthMap depth = load_depth_png(dir / "depth.png");
  CHECK(depth.valid_count() == depth.value.size());
  CHECK(std::abs(depth.at(160, 120) - 150.0) <= 0.05 + 1e-9);  // 300*5/10
}

TEST_CASE("synth then estimate then eval round trip") {
  const auto dir = testsupport::temp_dir("cli_pipeline");
  const auto scene = dir / "scene";
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + scene.string() +
                  " --n-frames 3 --seed 1 " + kSmallCam) == 0);

  const auto results = dir / "results.json";
  const std::string est_cmd = "estimate " + scene.string() + " " + tool_obj().string() +
                              " -o " + results.string();
  REQUIRE(run_cli(est_cmd) == 0);

  const auto loaded = load_results(results);
  REQUIRE(loaded.size() == 3);
  for (const auto& r : loaded) CHECK(r.ok());

  const auto eval_json = dir / "eval.json";
  REQUIRE(run_cli("eval " + scene.string() + " " + results.string() + " " +
                  tool_obj().string() + " --report json -o " + eval_json.string()) == 0);
  const json summary = read_json(eval_json);
  CHECK(summary.at("n_frames").get<int>() == 3);
  CHECK(summary.at("n_failed").get<int>() == 0);
  CHECK(summary.at("mean_add_mm").get<double>() < 5.0);
  CHECK(summary.at("recall_add_5mm").get<double>() == 1.0);

  // Rerunning the estimator reproduces the results file byte for byte.
  const std::string bytes_a = read_bytes(results);
  REQUIRE(run_cli(est_cmd) == 0);
  CHECK(read_bytes(results) == bytes_a);

  // The table report also succeeds.
  CHECK(run_cli("eval " + scene.string() + " " + results.string() + " " +
                tool_obj().string()) == 0);
}

TEST_CASE("synth is byte-identical per seed through the CLI") {
  const auto dir = testsupport::temp_dir("cli_synth_det");
  const std::string flags = " --n-frames 2 --seed 5 --n-occluders 1 --occluder " +
                            occ_obj().string() + " " + kSmallCam;
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + (dir / "a").string() + flags) == 0);
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + (dir / "b").string() + flags) == 0);

  std::vector<fs::path> rels;
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (e.is_regular_file()) rels.push_back(fs::relative(e.path(), dir / "a"));
  }
  REQUIRE(rels.size() >= 2 * 3 + 2);
  for (const auto& rel : rels) {
    CHECK(read_bytes(dir / "a" / rel) == read_bytes(dir / "b" / rel));
  }
}

TEST_CASE("pseudomask recovers the visible masks of an occluded scene") {
  const auto dir = testsupport::temp_dir("cli_pseudo");
  const auto scene = dir / "scene";
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + scene.string() +
                  " --n-frames 3 --seed 2 --n-occluders 1 --occluder " + occ_obj().string() +
                  " " + kSmallCam) == 0);
  REQUIRE(run_cli("pseudomask " + scene.string() + " " + tool_obj().string()) == 0);

  const json report = read_json(scene / "mask_pseudo" / "report.json");
  for (int f = 0; f < 3; ++f) {
    const auto name = frame_name(f) + ".png";
    const BinaryMask pseudo = load_mask_png(scene / "mask_pseudo" / name);
    const BinaryMask visib = load_mask_png(scene / "mask_visib" / name);
    CHECK(pseudo == visib);
    const json& r = report.at(frame_name(f));
    CHECK(r.at("retained_pixels").get<long long>() ==
          static_cast<long long>(visib.count()));
    CHECK(r.at("projected_pixels").get<long long>() ==
          r.at("retained_pixels").get<long long>() +
              r.at("rejected_occluded").get<long long>() +
              r.at("rejected_no_depth").get<long long>());
  }

  // Estimation from pseudo-label masks also runs cleanly.
  const auto results = dir / "results.json";
  REQUIRE(run_cli("estimate " + scene.string() + " " + tool_obj().string() + " -o " +
                  results.string() +
                  " --mask-source pseudo --n-viewpoints 42 --n-inplane 8") == 0);
  CHECK(load_results(results).size() == 3);
}

TEST_CASE("eval rejects results for unknown frames") {
  const auto dir = testsupport::temp_dir("cli_eval_unknown");
  const auto scene = dir / "scene";
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + scene.string() +
                  " --n-frames 2 --seed 3 " + kSmallCam) == 0);

  std::vector<PoseResult> fake;
  PoseResult r;
  r.frame_id = 7;  // not in the scene
  r.pose.translation = Vec3(0, 0, 200);
  fake.push_back(r);
  write_results(dir / "fake.json", fake);

  const auto log = dir / "log.txt";
  CHECK(run_cli("eval " + scene.string() + " " + (dir / "fake.json").string() + " " +
                    tool_obj().string(),
                log) == 2);
  CHECK(read_bytes(log).find("7") != std::string::npos);
}

TEST_CASE("eval-seg: perfect predictions score 1.0") {
  const auto dir = testsupport::temp_dir("cli_evalseg");
  const auto scene = dir / "scene";
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + scene.string() +
                  " --n-frames 3 --seed 4 " + kSmallCam) == 0);

  const auto pred = dir / "pred";
  fs::create_directories(pred);
  json conf = json::object();
  for (int f = 0; f < 3; ++f) {
    const auto name = frame_name(f) + ".png";
    fs::copy_file(scene / "mask_visib" / name, pred / name);
    conf[frame_name(f)] = 1.0;
  }
  std::ofstream(dir / "conf.json") << conf.dump();

  const auto out = dir / "seg.json";
  REQUIRE(run_cli("eval-seg " + pred.string() + " " + (scene / "mask_visib").string() +
                  " --confidences " + (dir / "conf.json").string() + " --report json -o " +
                  out.string()) == 0);
  const json s = read_json(out);
  CHECK(s.at("ap_5095").get<double>() == 1.0);
  CHECK(s.at("ar_5095").get<double>() == 1.0);

  // A prediction for a frame with no ground truth is an alignment error.
  BinaryMask stray(320, 240);
  stray.set(5, 5);
  save_mask_png(pred / "000099.png", stray);
  conf["000099"] = 0.5;
  std::ofstream(dir / "conf.json", std::ios::trunc) << conf.dump();
  const auto log = dir / "log.txt";
  CHECK(run_cli("eval-seg " + pred.string() + " " + (scene / "mask_visib").string() +
                    " --confidences " + (dir / "conf.json").string(),
                log) == 2);
  CHECK(read_bytes(log).find("99") != std::string::npos);

  // Missing confidence entry is a configuration error.
  fs::remove(pred / "000099.png");
  conf.erase("000099");
  conf.erase(frame_name(1));
  std::ofstream(dir / "conf.json", std::ios::trunc) << conf.dump();
  CHECK(run_cli("eval-seg " + pred.string() + " " + (scene / "mask_visib").string() +
                " --confidences " + (dir / "conf.json").string()) == 2);
}

TEST_CASE("estimate treats a missing mask file as a configuration error") {
  const auto dir = testsupport::temp_dir("cli_estimate_nomask");
  const auto scene = dir / "scene";
  REQUIRE(run_cli("synth " + tool_obj().string() + " " + scene.string() +
                  " --n-frames 1 --seed 6 " + kSmallCam) == 0);
  fs::remove(scene / "mask_visib" / "000000.png");
  CHECK(run_cli("estimate " + scene.string() + " " + tool_obj().string() + " -o " +
                (dir / "r.json").string() + " --n-viewpoints 12 --n-inplane 4") == 2);
}
