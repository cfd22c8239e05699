#include "vgrasp/geometry/triangle_mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace vgrasp {

void Aabb::extend(const Vec3& p)
{
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

void Aabb::extend(const Aabb& o)
{
  extend(o.lo);
  extend(o.hi);
}

Aabb Aabb::inflated(double r) const
{
  return {lo - Vec3{r, r, r}, hi + Vec3{r, r, r}};
}

bool Aabb::overlaps(const Aabb& o) const
{
  return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y && lo.z <= o.hi.z &&
         o.lo.z <= hi.z;
}

double Aabb::squared_distance(const Vec3& p) const
{
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double v = p[i];
    const double l = lo[i];
    const double h = hi[i];
    if (v < l)
      d2 += (l - v) * (l - v);
    else if (v > h)
      d2 += (v - h) * (v - h);
  }
  return d2;
}

bool Aabb::ray_interval(const Vec3& origin, const Vec3& dir, double t0, double t1) const
{
  for (int i = 0; i < 3; ++i) {
    const double o = origin[i];
    const double d = dir[i];
    if (d == 0.0) {
      if (o < lo[i] || o > hi[i])
        return false;
      continue;
    }
    double ta = (lo[i] - o) / d;
    double tb = (hi[i] - o) / d;
    if (ta > tb)
      std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1)
      return false;
  }
  return true;
}

namespace {

constexpr std::uint32_t kLeafSize = 4;

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles)
  : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
  if (triangles_.empty())
    throw InvalidInput("triangle mesh has no triangles");
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (!is_finite(vertices_[i]))
      throw InvalidInput("vertex " + std::to_string(i) + " has a non-finite coordinate");

  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_use;
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const auto& t = triangles_[i];
    for (auto idx : t)
      if (idx >= vertices_.size())
        throw InvalidInput("triangle " + std::to_string(i) + " references vertex " +
                           std::to_string(idx) + " out of range");
    const Triangle tri = triangle(i);
    const double area = 0.5 * norm(cross(tri.b - tri.a, tri.c - tri.a));
    if (!(area > kMinTriangleArea))
      throw InvalidInput("triangle " + std::to_string(i) + " is degenerate (area " +
                         std::to_string(area) + ")");
    for (int e = 0; e < 3; ++e) {
      std::uint32_t u = t[e];
      std::uint32_t v = t[(e + 1) % 3];
      if (u > v)
        std::swap(u, v);
      ++edge_use[{u, v}];
    }
  }
  watertight_ = std::all_of(edge_use.begin(), edge_use.end(),
                            [](const auto& kv) { return kv.second == 2; });

  const auto n = static_cast<std::uint32_t>(triangles_.size());
  std::vector<Aabb> boxes(n);
  std::vector<Vec3> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const Triangle tri = triangle(i);
    boxes[i].extend(tri.a);
    boxes[i].extend(tri.b);
    boxes[i].extend(tri.c);
    centroids[i] = (tri.a + tri.b + tri.c) / 3.0;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * n / kLeafSize + 2);
  build(0, n, boxes, centroids);
}

Triangle TriangleMesh::triangle(std::size_t i) const
{
  const auto& t = triangles_[i];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

std::uint32_t TriangleMesh::build(std::uint32_t begin, std::uint32_t end, std::vector<Aabb>& boxes,
                                  std::vector<Vec3>& centroids)
{
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  Aabb centroid_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    box.extend(boxes[order_[i]]);
    centroid_box.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;

  if (end - begin <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }

  const Vec3 extent = centroid_box.hi - centroid_box.lo;
  int axis = 0;
  if (extent.y > extent[axis])
    axis = 1;
  if (extent.z > extent[axis])
    axis = 2;

  // Median split; ties broken by triangle index so the tree is reproducible.
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });

  const std::uint32_t left = build(begin, mid, boxes, centroids);
  const std::uint32_t right = build(mid, end, boxes, centroids);
  nodes_[index].first = left;
  nodes_[index].second = right;
  return index;
}

}  // namespace vgrasp
