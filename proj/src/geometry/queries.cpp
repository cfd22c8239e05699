#include "vgrasp/geometry/queries.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace vgrasp {

void Capsule::validate() const
{
  require_finite(a, "capsule endpoint a");
  require_finite(b, "capsule endpoint b");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidInput("capsule radius must be positive");
  if (a == b)
    throw InvalidInput("capsule endpoints coincide");
}

void Sphere::validate() const
{
  require_finite(center, "sphere center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidInput("sphere radius must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nondegenerate(const Triangle& tri)
{
  const double area = 0.5 * norm(cross(tri.b - tri.a, tri.c - tri.a));
  if (!(area > kMinTriangleArea))
    throw InvalidInput("degenerate triangle");
}

// Voronoi-region walk over the closed triangle.
Vec3 closest_on_triangle_unchecked(const Vec3& p, const Triangle& tri)
{
  const Vec3& a = tri.a;
  const Vec3& b = tri.b;
  const Vec3& c = tri.c;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0)
    return a;

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3)
    return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
    return a + ab * (d1 / (d1 - d3));

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6)
    return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
    return a + ac * (d2 / (d2 - d6));

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return a + ab * v + ac * w;
}

// Segment s0-s1 against the triangle plane, Moller-Trumbore with t in [0,1].
bool segment_crosses_triangle(const Vec3& s0, const Vec3& s1, const Triangle& tri)
{
  const Vec3 dir = s1 - s0;
  const Vec3 e1 = tri.b - tri.a;
  const Vec3 e2 = tri.c - tri.a;
  const Vec3 pvec = cross(dir, e2);
  const double det = dot(e1, pvec);
  if (det == 0.0)
    return false;
  const double inv = 1.0 / det;
  const Vec3 tvec = s0 - tri.a;
  const double u = dot(tvec, pvec) * inv;
  if (u < 0.0 || u > 1.0)
    return false;
  const Vec3 qvec = cross(tvec, e1);
  const double v = dot(dir, qvec) * inv;
  if (v < 0.0 || u + v > 1.0)
    return false;
  const double t = dot(e2, qvec) * inv;
  return t >= 0.0 && t <= 1.0;
}

template <class LeafFn, class NodeFilter>
void walk_bvh(const TriangleMesh& mesh, NodeFilter&& accept, LeafFn&& on_triangle)
{
  const auto nodes = mesh.bvh_nodes();
  const auto order = mesh.bvh_order();
  std::array<std::uint32_t, 128> stack{};
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const auto& node = nodes[stack[--top]];
    if (!accept(node.box))
      continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
        if (on_triangle(order[i]))
          return;
      continue;
    }
    stack[top++] = node.second;
    stack[top++] = node.first;
  }
}

// Earliest t >= 0 at which a sphere of radius r moving from ro along unit rd
// touches the capsule pa-pb (i.e. the ray enters the capsule of radius r).
double ray_capsule_entry(const Vec3& ro, const Vec3& rd, const Vec3& pa, const Vec3& pb, double r)
{
  double best = kInf;

  const Vec3 ba = pb - pa;
  const Vec3 oa = ro - pa;
  const double baba = dot(ba, ba);
  const double bard = dot(ba, rd);
  const double baoa = dot(ba, oa);
  const double rdoa = dot(rd, oa);
  const double oaoa = dot(oa, oa);
  const double qa = baba - bard * bard;
  const double qb = baba * rdoa - baoa * bard;
  const double qc = baba * oaoa - baoa * baoa - r * r * baba;
  const double h = qb * qb - qa * qc;
  if (qa > 1e-14 * baba && h >= 0.0) {
    const double sh = std::sqrt(h);
    // Entry root of qa t^2 + 2 qb t + qc = 0, cancellation-free form.
    const double t = qb <= 0.0 ? qc / (-qb + sh) : (-qb - sh) / qa;
    const double y = baoa + t * bard;
    if (t >= 0.0 && y > 0.0 && y < baba)
      best = t;
  }

  for (const Vec3* end : {&pa, &pb}) {
    const Vec3 oc = ro - *end;
    const double b = dot(rd, oc);
    const double c = dot(oc, oc) - r * r;
    const double hh = b * b - c;
    if (hh < 0.0)
      continue;
    const double sh = std::sqrt(hh);
    const double t = b >= 0.0 ? -b - sh : c / (-b + sh);
    if (t >= 0.0 && t < best)
      best = t;
  }
  return best;
}

double ray_triangle_sweep(const Vec3& ro, const Vec3& rd, double r, const Triangle& tri)
{
  double best = kInf;

  const Vec3 n = normalized(cross(tri.b - tri.a, tri.c - tri.a));
  const double s0 = dot(ro - tri.a, n);
  const double dn = dot(rd, n);
  double t_face = kInf;
  double side = 0.0;
  if (s0 > r && dn < 0.0) {
    t_face = (s0 - r) / (-dn);
    side = 1.0;
  } else if (s0 < -r && dn > 0.0) {
    t_face = (-r - s0) / dn;
    side = -1.0;
  }
  if (t_face < kInf) {
    const Vec3 q = ro + rd * t_face - n * (side * r);
    // Inside test via edge half-planes.
    const bool inside = dot(cross(tri.b - tri.a, q - tri.a), n) >= 0.0 &&
                        dot(cross(tri.c - tri.b, q - tri.b), n) >= 0.0 &&
                        dot(cross(tri.a - tri.c, q - tri.c), n) >= 0.0;
    if (inside)
      best = t_face;
  }

  best = std::min(best, ray_capsule_entry(ro, rd, tri.a, tri.b, r));
  best = std::min(best, ray_capsule_entry(ro, rd, tri.b, tri.c, r));
  best = std::min(best, ray_capsule_entry(ro, rd, tri.c, tri.a, r));
  return best;
}

// Generic ray directions for parity casting; the first is used unless a hit
// lands on an edge, a vertex, or the ray origin.
constexpr std::array<Vec3, 6> kParityDirections = {{
    {0.5773502691896258, 0.5773502691896257, 0.5773502691896259},
    {-0.2672612419124244, 0.5345224838248488, 0.8017837257372732},
    {0.8164965809277260, -0.4082482904638630, 0.4082482904638631},
    {-0.6859943405700354, -0.5144957554275265, 0.5144957554275266},
    {0.1961161351381840, 0.9805806756909202, -0.0000000000000001},
    {0.3015113445777636, -0.3015113445777637, -0.9045340337332909},
}};

enum class ParityResult { Even, Odd, Degenerate };

ParityResult parity_along(const Vec3& p, const Vec3& dir, const TriangleMesh& mesh)
{
  constexpr double kEdgeEps = 1e-10;
  int crossings = 0;
  bool degenerate = false;
  walk_bvh(
      mesh, [&](const Aabb& box) { return box.ray_interval(p, dir, 0.0, kInf); },
      [&](std::uint32_t ti) {
        const Triangle tri = mesh.triangle(ti);
        const Vec3 e1 = tri.b - tri.a;
        const Vec3 e2 = tri.c - tri.a;
        const Vec3 pvec = cross(dir, e2);
        const double det = dot(e1, pvec);
        const double scale = squared_norm(e1) + squared_norm(e2);
        if (std::abs(det) <= 1e-14 * scale) {
          // Ray parallel to the triangle plane; only a problem if it lies in it.
          if (std::abs(dot(p - tri.a, normalized(cross(e1, e2)))) <= 1e-12)
            degenerate = true;
          return degenerate;
        }
        const double inv = 1.0 / det;
        const Vec3 tvec = p - tri.a;
        const double u = dot(tvec, pvec) * inv;
        const Vec3 qvec = cross(tvec, e1);
        const double v = dot(dir, qvec) * inv;
        const double t = dot(e2, qvec) * inv;
        if (u < -kEdgeEps || v < -kEdgeEps || u + v > 1.0 + kEdgeEps || t < -kEdgeEps)
          return false;
        if (u <= kEdgeEps || v <= kEdgeEps || u + v >= 1.0 - kEdgeEps || t <= kEdgeEps) {
          degenerate = true;
          return true;
        }
        ++crossings;
        return false;
      });
  if (degenerate)
    return ParityResult::Degenerate;
  return crossings % 2 == 1 ? ParityResult::Odd : ParityResult::Even;
}

bool point_in_mesh_local(const Vec3& p, const TriangleMesh& mesh)
{
  if (mesh.bounds().squared_distance(p) > 0.0)
    return false;
  const ClosestPoint cp = closest_point_on_mesh(p, mesh);
  const Vec3 ext = mesh.bounds().hi - mesh.bounds().lo;
  const double scale = std::max({ext.x, ext.y, ext.z, 1.0});
  if (cp.squared_distance <= (1e-12 * scale) * (1e-12 * scale))
    return false;
  for (const Vec3& dir : kParityDirections) {
    const ParityResult r = parity_along(p, dir, mesh);
    if (r != ParityResult::Degenerate)
      return r == ParityResult::Odd;
  }
  // Every direction grazed an edge; fall back to the closest face orientation.
  const Triangle tri = mesh.triangle(cp.triangle_index);
  return dot(p - cp.point, cross(tri.b - tri.a, tri.c - tri.a)) < 0.0;
}

bool capsule_overlaps_local(const Vec3& a, const Vec3& b, double r, const TriangleMesh& mesh)
{
  Aabb query;
  query.extend(a);
  query.extend(b);
  query = query.inflated(r);
  bool hit = false;
  walk_bvh(
      mesh, [&](const Aabb& box) { return box.overlaps(query); },
      [&](std::uint32_t ti) {
        if (segment_triangle_distance(a, b, mesh.triangle(ti)) <= r)
          hit = true;
        return hit;
      });
  if (hit)
    return true;
  if (mesh.is_watertight())
    return point_in_mesh_local(a, mesh) || point_in_mesh_local(b, mesh);
  return false;
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Triangle& tri)
{
  require_finite(p, "query point");
  require_nondegenerate(tri);
  return closest_on_triangle_unchecked(p, tri);
}

double closest_points_segment_segment(const Vec3& p0, const Vec3& p1, const Vec3& q0,
                                      const Vec3& q1, Vec3& on_p, Vec3& on_q)
{
  const Vec3 d1 = p1 - p0;
  const Vec3 d2 = q1 - q0;
  const Vec3 r = p0 - q0;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0;
  double t = 0.0;
  if (a <= 0.0 && e <= 0.0) {
    on_p = p0;
    on_q = q0;
    return squared_norm(p0 - q0);
  }
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  on_p = p0 + d1 * s;
  on_q = q0 + d2 * t;
  return squared_norm(on_p - on_q);
}

double segment_triangle_distance(const Vec3& s0, const Vec3& s1, const Triangle& tri)
{
  if (segment_crosses_triangle(s0, s1, tri))
    return 0.0;
  double best = std::min(squared_norm(s0 - closest_on_triangle_unchecked(s0, tri)),
                         squared_norm(s1 - closest_on_triangle_unchecked(s1, tri)));
  Vec3 on_p;
  Vec3 on_q;
  best = std::min(best, closest_points_segment_segment(s0, s1, tri.a, tri.b, on_p, on_q));
  best = std::min(best, closest_points_segment_segment(s0, s1, tri.b, tri.c, on_p, on_q));
  best = std::min(best, closest_points_segment_segment(s0, s1, tri.c, tri.a, on_p, on_q));
  return std::sqrt(best);
}

ClosestPoint closest_point_on_mesh(const Vec3& p, const TriangleMesh& mesh)
{
  ClosestPoint best{{}, kInf, 0};
  walk_bvh(
      mesh, [&](const Aabb& box) { return box.squared_distance(p) <= best.squared_distance; },
      [&](std::uint32_t ti) {
        const Vec3 q = closest_on_triangle_unchecked(p, mesh.triangle(ti));
        const double d2 = squared_norm(q - p);
        if (d2 < best.squared_distance ||
            (d2 == best.squared_distance && ti < best.triangle_index)) {
          best = {q, d2, ti};
        }
        return false;
      });
  return best;
}

bool capsule_overlaps_mesh(const Capsule& capsule, const TriangleMesh& mesh, const Transform& tf)
{
  capsule.validate();
  tf.validate();
  const Transform inv = tf.inverse();
  return capsule_overlaps_local(inv.apply(capsule.a), inv.apply(capsule.b), capsule.radius, mesh);
}

bool sphere_overlaps_mesh(const Sphere& sphere, const TriangleMesh& mesh, const Transform& tf)
{
  sphere.validate();
  tf.validate();
  const Vec3 c = tf.inverse().apply(sphere.center);
  const double r2 = sphere.radius * sphere.radius;
  if (mesh.bounds().squared_distance(c) <= r2 && closest_point_on_mesh(c, mesh).squared_distance <= r2)
    return true;
  return mesh.is_watertight() && point_in_mesh_local(c, mesh);
}

std::vector<OverlapEntry> sphere_overlap_points(const Sphere& sphere,
                                                std::span<const PlacedMesh> objects)
{
  sphere.validate();
  std::vector<OverlapEntry> out;
  for (const auto& obj : objects)
    if (sphere_overlaps_mesh(sphere, *obj.mesh, obj.pose))
      out.push_back({obj.id, obj.pivot()});
  return out;
}

std::optional<SphereTraceHit> sphere_trace(const Vec3& start, const Vec3& direction, double radius,
                                           double max_length, const TriangleMesh& mesh,
                                           const Transform& tf)
{
  require_finite(start, "trace start");
  require_finite(direction, "trace direction");
  if (std::abs(norm(direction) - 1.0) > 1e-9)
    throw InvalidInput("trace direction must be unit length");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidInput("trace radius must be positive");
  if (!(max_length > 0.0) || !std::isfinite(max_length))
    throw InvalidInput("trace length must be positive");
  tf.validate();

  const Transform inv = tf.inverse();
  const Vec3 ro = inv.apply(start);
  const Vec3 rd = inv.apply_vector(direction);

  const ClosestPoint initial = closest_point_on_mesh(ro, mesh);
  if (initial.squared_distance <= radius * radius)
    return SphereTraceHit{tf.apply(initial.point), 0.0, initial.triangle_index};

  double best_t = kInf;
  std::uint32_t best_tri = 0;
  walk_bvh(
      mesh,
      [&](const Aabb& box) {
        return box.inflated(radius).ray_interval(ro, rd, 0.0, std::min(best_t, max_length));
      },
      [&](std::uint32_t ti) {
        const double t = ray_triangle_sweep(ro, rd, radius, mesh.triangle(ti));
        if (t < best_t || (t == best_t && t < kInf && ti < best_tri)) {
          best_t = t;
          best_tri = ti;
        }
        return false;
      });
  if (!(best_t <= max_length))
    return std::nullopt;

  const Vec3 center = ro + rd * best_t;
  const Vec3 ip = closest_on_triangle_unchecked(center, mesh.triangle(best_tri));
  return SphereTraceHit{tf.apply(ip), best_t, best_tri};
}

bool point_in_mesh(const Vec3& p, const TriangleMesh& mesh, const Transform& tf)
{
  require_finite(p, "query point");
  tf.validate();
  if (!mesh.is_watertight())
    throw InvalidInput("point containment requires a watertight mesh");
  return point_in_mesh_local(tf.inverse().apply(p), mesh);
}

}  // namespace vgrasp
