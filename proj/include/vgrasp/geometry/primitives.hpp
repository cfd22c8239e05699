#pragma once

#include <filesystem>
#include <iosfwd>

#include "vgrasp/geometry/triangle_mesh.hpp"

namespace vgrasp {

// Watertight, outward-wound procedural meshes centered at the origin.

/// Subdivided icosahedron with every vertex on the sphere of `radius`.
TriangleMesh make_icosphere(double radius, int subdivisions);

/// Axis-aligned box with the given full extents, two triangles per face.
TriangleMesh make_box(const Vec3& extents);

/// Capped cylinder along z, `segments` facets around.
TriangleMesh make_cylinder(double radius, double height, int segments);

/// Smallest distance from the origin to any face plane of a mesh that
/// contains the origin (inradius of a convex polyhedron).
double inscribed_radius(const TriangleMesh& mesh);

/// Wavefront OBJ subset: `v x y z` and `f` records (polygons fan-triangulated,
/// `i/t/n` tokens accepted, negative indices rejected). Other records are
/// ignored. Throws LoadError with the source name on any failure.
TriangleMesh parse_obj(std::istream& in, const std::string& source_name = "<stream>");
TriangleMesh load_obj(const std::filesystem::path& path);

}  // namespace vgrasp
