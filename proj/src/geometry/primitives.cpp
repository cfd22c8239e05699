#include "vgrasp/geometry/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

namespace vgrasp {

TriangleMesh make_icosphere(double radius, int subdivisions)
{
  if (!(radius > 0.0))
    throw InvalidInput("icosphere radius must be positive");
  if (subdivisions < 0 || subdivisions > 8)
    throw InvalidInput("icosphere subdivisions must be in [0, 8]");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts)
    v = normalized(v);
  std::vector<TriangleIndices> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end())
        return it->second;
      const auto idx = static_cast<std::uint32_t>(verts.size());
      verts.push_back(normalized(verts[a] + verts[b]));
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<TriangleIndices> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const auto ab = midpoint(f[0], f[1]);
      const auto bc = midpoint(f[1], f[2]);
      const auto ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  for (auto& v : verts)
    v = v * radius;
  return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh make_box(const Vec3& extents)
{
  if (!(extents.x > 0.0 && extents.y > 0.0 && extents.z > 0.0))
    throw InvalidInput("box extents must be positive");
  const Vec3 h = extents * 0.5;
  std::vector<Vec3> verts;
  for (int i = 0; i < 8; ++i)
    verts.push_back({(i & 1) ? h.x : -h.x, (i & 2) ? h.y : -h.y, (i & 4) ? h.z : -h.z});
  std::vector<TriangleIndices> faces = {
      {0, 2, 3}, {0, 3, 1},  // -z
      {4, 5, 7}, {4, 7, 6},  // +z
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 6, 7}, {2, 7, 3},  // +y
      {0, 4, 6}, {0, 6, 2},  // -x
      {1, 3, 7}, {1, 7, 5},  // +x
  };
  return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh make_cylinder(double radius, double height, int segments)
{
  if (!(radius > 0.0 && height > 0.0))
    throw InvalidInput("cylinder dimensions must be positive");
  if (segments < 3)
    throw InvalidInput("cylinder needs at least 3 segments");
  const double hz = height * 0.5;
  const auto n = static_cast<std::uint32_t>(segments);
  std::vector<Vec3> verts;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    verts.push_back({radius * std::cos(a), radius * std::sin(a), -hz});
    verts.push_back({radius * std::cos(a), radius * std::sin(a), hz});
  }
  const std::uint32_t bottom = 2 * n;
  const std::uint32_t top = 2 * n + 1;
  verts.push_back({0, 0, -hz});
  verts.push_back({0, 0, hz});
  std::vector<TriangleIndices> faces;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    const std::uint32_t b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    faces.push_back({b0, b1, t1});
    faces.push_back({b0, t1, t0});
    faces.push_back({bottom, b1, b0});
    faces.push_back({top, t0, t1});
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

double inscribed_radius(const TriangleMesh& mesh)
{
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const Triangle tri = mesh.triangle(i);
    const Vec3 n = normalized(cross(tri.b - tri.a, tri.c - tri.a));
    r = std::min(r, std::abs(dot(tri.a, n)));
  }
  return r;
}

namespace {

long parse_index(const std::string& token, std::size_t vertex_count, const std::string& where)
{
  const std::string head = token.substr(0, token.find('/'));
  std::size_t used = 0;
  long idx = 0;
  try {
    idx = std::stol(head, &used);
  } catch (const std::exception&) {
    throw LoadError(where + ": malformed face index '" + token + "'");
  }
  if (used != head.size())
    throw LoadError(where + ": malformed face index '" + token + "'");
  if (idx < 0)
    throw LoadError(where + ": negative (relative) face indices are not supported");
  if (idx == 0 || static_cast<std::size_t>(idx) > vertex_count)
    throw LoadError(where + ": face index " + std::to_string(idx) + " out of range");
  return idx - 1;
}

}  // namespace

TriangleMesh parse_obj(std::istream& in, const std::string& source_name)
{
  std::vector<Vec3> verts;
  std::vector<TriangleIndices> faces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#')
      continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z))
        throw LoadError(where + ": malformed vertex record");
      if (!is_finite(v))
        throw LoadError(where + ": non-finite vertex coordinate");
      verts.push_back(v);
    } else if (tag == "f") {
      std::vector<std::uint32_t> poly;
      std::string tok;
      while (ls >> tok)
        poly.push_back(static_cast<std::uint32_t>(parse_index(tok, verts.size(), where)));
      if (poly.size() < 3)
        throw LoadError(where + ": face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < poly.size(); ++k)
        faces.push_back({poly[0], poly[k], poly[k + 1]});
    }
  }
  if (faces.empty())
    throw LoadError(source_name + ": no faces");
  try {
    return TriangleMesh(std::move(verts), std::move(faces));
  } catch (const InvalidInput& e) {
    throw LoadError(source_name + ": " + e.what());
  }
}

TriangleMesh load_obj(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw LoadError("cannot open mesh file " + path.string());
  return parse_obj(in, path.string());
}

}  // namespace vgrasp
