#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vgrasp/geometry/math.hpp"

namespace vgrasp {

struct Triangle
{
  Vec3 a;
  Vec3 b;
  Vec3 c;
};

struct Aabb
{
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void extend(const Vec3& p);
  void extend(const Aabb& o);
  Aabb inflated(double r) const;
  bool overlaps(const Aabb& o) const;
  double squared_distance(const Vec3& p) const;
  // Parameter interval of the ray origin+t*dir inside the box, clipped to [t0,t1].
  bool ray_interval(const Vec3& origin, const Vec3& dir, double t0, double t1) const;
};

using TriangleIndices = std::array<std::uint32_t, 3>;

// Minimum triangle area admitted at construction, m^2.
inline constexpr double kMinTriangleArea = 1e-12;

// Indexed triangle surface. Immutable after construction; carries a bounding
// volume hierarchy used by every query in queries.hpp.
//
// Construction validates every index and rejects degenerate triangles. The
// watertight flag is derived from topology: every undirected edge must be
// shared by exactly two triangles.
class TriangleMesh
{
public:
  struct BvhNode
  {
    Aabb box;
    // Leaf when count > 0: triangles order_[first, first + count).
    // Otherwise `first` and `second` index the two child nodes.
    std::uint32_t first = 0;
    std::uint32_t second = 0;
    std::uint32_t count = 0;
  };

  TriangleMesh(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const TriangleIndices> triangles() const { return triangles_; }
  std::size_t triangle_count() const { return triangles_.size(); }
  Triangle triangle(std::size_t i) const;
  bool is_watertight() const { return watertight_; }
  const Aabb& bounds() const { return nodes_.front().box; }

  std::span<const BvhNode> bvh_nodes() const { return nodes_; }
  std::span<const std::uint32_t> bvh_order() const { return order_; }

private:
  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Aabb>& boxes,
                      std::vector<Vec3>& centroids);

  std::vector<Vec3> vertices_;
  std::vector<TriangleIndices> triangles_;
  bool watertight_ = false;
  std::vector<BvhNode> nodes_;
  std::vector<std::uint32_t> order_;
};

}  // namespace vgrasp
