#include "posekit/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "posekit/rng.hpp"

namespace posekit {

void TriangleMesh::validate() const {
  if (vertices.size() < 3) {
    throw ValidationError("mesh: vertex count must be >= 3, got " +
                          std::to_string(vertices.size()));
  }
  if (triangles.empty()) {
    throw ValidationError("mesh: triangle count must be >= 1, got 0");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].allFinite()) {
      throw ValidationError("mesh: non-finite coordinate in vertex " + std::to_string(i));
    }
  }
  const int n = static_cast<int>(vertices.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int idx = triangles[t][k];
      if (idx < 0 || idx >= n) {
        throw ValidationError("mesh: triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(idx) + " but mesh has " + std::to_string(n) +
                              " vertices (indices must be < vertex count)");
      }
    }
  }
}

TriangleMesh::Bounds TriangleMesh::bounds() const {
  Bounds b;
  b.min = Vec3::Constant(std::numeric_limits<double>::infinity());
  b.max = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const Vec3& v : vertices) {
    b.min = b.min.cwiseMin(v);
    b.max = b.max.cwiseMax(v);
  }
  return b;
}

Vec3 TriangleMesh::centroid() const {
  Vec3 c = Vec3::Zero();
  for (const Vec3& v : vertices) c += v;
  return vertices.empty() ? c : Vec3(c / static_cast<double>(vertices.size()));
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::filesystem::path& path, int line, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) parse_fail(path, line, "bad number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line, "bad number '" + tok + "'");
  }
}

long to_long(const std::filesystem::path& path, int line, const std::string& tok) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(path, line, "bad integer '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

// Fan triangulation from the polygon's first vertex.
void push_face(TriangleMesh& mesh, const std::vector<long>& idx) {
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    mesh.triangles.push_back({static_cast<int>(idx[0]), static_cast<int>(idx[k]),
                              static_cast<int>(idx[k + 1])});
  }
}

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<std::string> properties;  // scalar property names, lists flagged below
  bool has_list = false;                // face-style list property present
};

}  // namespace

TriangleMesh load_mesh_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path.string());

  std::string line;
  int lineno = 0;
  auto next_line = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      return true;
    }
    if (required) parse_fail(path, lineno, "unexpected end of file");
    return false;
  };

  next_line(true);
  if (split_ws(line) != std::vector<std::string>{"ply"}) {
    parse_fail(path, lineno, "not a PLY file (missing 'ply' magic)");
  }

  std::vector<PlyElement> elements;
  bool ascii = false;
  while (true) {
    next_line(true);
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        parse_fail(path, lineno, "only ASCII PLY is supported, got '" + line + "'");
      }
      ascii = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) parse_fail(path, lineno, "malformed element declaration");
      PlyElement el;
      el.name = tok[1];
      el.count = to_long(path, lineno, tok[2]);
      if (el.count < 0) parse_fail(path, lineno, "negative element count");
      elements.push_back(el);
    } else if (tok[0] == "property") {
      if (elements.empty()) parse_fail(path, lineno, "property before any element");
      if (tok.size() >= 2 && tok[1] == "list") {
        elements.back().has_list = true;
      } else {
        if (tok.size() != 3) parse_fail(path, lineno, "malformed property declaration");
        elements.back().properties.push_back(tok[2]);
      }
    } else if (tok[0] == "end_header") {
      break;
    } else {
      parse_fail(path, lineno, "unknown header keyword '" + tok[0] + "'");
    }
  }
  if (!ascii) parse_fail(path, lineno, "missing 'format ascii 1.0' line");

  TriangleMesh mesh;
  for (const PlyElement& el : elements) {
    if (el.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t i = 0; i < el.properties.size(); ++i) {
        if (el.properties[i] == "x") ix = static_cast<int>(i);
        if (el.properties[i] == "y") iy = static_cast<int>(i);
        if (el.properties[i] == "z") iz = static_cast<int>(i);
      }
      if (ix < 0 || iy < 0 || iz < 0) {
        parse_fail(path, lineno, "vertex element lacks x/y/z properties");
      }
      mesh.vertices.reserve(static_cast<std::size_t>(el.count));
      for (long i = 0; i < el.count; ++i) {
        next_line(true);
        const auto tok = split_ws(line);
        if (tok.size() < el.properties.size()) {
          parse_fail(path, lineno, "vertex line has " + std::to_string(tok.size()) +
                                       " values, expected " +
                                       std::to_string(el.properties.size()));
        }
        mesh.vertices.emplace_back(to_double(path, lineno, tok[ix]),
                                   to_double(path, lineno, tok[iy]),
                                   to_double(path, lineno, tok[iz]));
      }
    } else if (el.name == "face") {
      for (long i = 0; i < el.count; ++i) {
        next_line(true);
        const auto tok = split_ws(line);
        if (tok.empty()) parse_fail(path, lineno, "empty face line");
        const long n = to_long(path, lineno, tok[0]);
        if (n < 3) parse_fail(path, lineno, "face with fewer than 3 vertices");
        if (static_cast<long>(tok.size()) < n + 1) {
          parse_fail(path, lineno, "face line lists " + std::to_string(tok.size() - 1) +
                                       " indices, header says " + std::to_string(n));
        }
        std::vector<long> idx(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k) idx[k] = to_long(path, lineno, tok[k + 1]);
        push_face(mesh, idx);
      }
    } else {
      // Unknown element: its lines are consumed and ignored.
      for (long i = 0; i < el.count; ++i) next_line(true);
    }
  }

  mesh.validate();
  return mesh;
}

TriangleMesh load_mesh_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path.string());

  TriangleMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) parse_fail(path, lineno, "vertex needs 3 coordinates");
      mesh.vertices.emplace_back(to_double(path, lineno, tok[1]),
                                 to_double(path, lineno, tok[2]),
                                 to_double(path, lineno, tok[3]));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) parse_fail(path, lineno, "face needs at least 3 vertices");
      std::vector<long> idx;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        // Vertex references look like i, i/t, i//n or i/t/n.
        const std::string ref = tok[k].substr(0, tok[k].find('/'));
        long v = to_long(path, lineno, ref);
        if (v < 0) {
          v = static_cast<long>(mesh.vertices.size()) + v;  // relative index
        } else {
          v -= 1;  // OBJ is 1-based
        }
        idx.push_back(v);
      }
      push_face(mesh, idx);
    }
    // vn/vt/g/o/s/usemtl/mtllib lines are ignored.
  }

  mesh.validate();
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".ply") return load_mesh_ply(path);
  if (ext == ".obj") return load_mesh_obj(path);

  // No recognized extension: sniff the first line.
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path.string());
  std::string first;
  std::getline(in, first);
  in.close();
  if (first.rfind("ply", 0) == 0) return load_mesh_ply(path);
  return load_mesh_obj(path);
}

void PointCloud::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw ValidationError("point cloud: non-finite coordinate in point " + std::to_string(i));
    }
  }
}

PointCloud transform_points(const RigidTransform& pose, const PointCloud& pts) {
  PointCloud out;
  out.points.reserve(pts.points.size());
  for (const Vec3& p : pts.points) out.points.push_back(pose.apply(p));
  return out;
}

PointCloud sample_surface_points(const TriangleMesh& mesh, int max_points, std::uint64_t seed) {
  mesh.validate();
  std::vector<double> cum_area(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Vec3& a = mesh.vertices[mesh.triangles[t][0]];
    const Vec3& b = mesh.vertices[mesh.triangles[t][1]];
    const Vec3& c = mesh.vertices[mesh.triangles[t][2]];
    total += 0.5 * ((b - a).cross(c - a)).norm();
    cum_area[t] = total;
  }
  PointCloud out;
  if (total <= 0.0) {
    out.points = mesh.vertices;
    return out;
  }
  Rng rng(seed);
  out.points.reserve(static_cast<std::size_t>(max_points));
  for (int i = 0; i < max_points; ++i) {
    const double pick = rng.uniform(0.0, total);
    const auto it = std::lower_bound(cum_area.begin(), cum_area.end(), pick);
    const std::size_t t = static_cast<std::size_t>(it - cum_area.begin());
    const Vec3& a = mesh.vertices[mesh.triangles[t][0]];
    const Vec3& b = mesh.vertices[mesh.triangles[t][1]];
    const Vec3& c = mesh.vertices[mesh.triangles[t][2]];
    double u = rng.uniform();
    double v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    out.points.push_back(a + u * (b - a) + v * (c - a));
  }
  return out;
}

}  // namespace posekit
