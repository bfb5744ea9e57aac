#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/geometry.hpp"

namespace liouville {

using Triangle = std::array<int, 3>;

/// Planar triangulation with oriented boundary loops.
///
/// Triangles are counterclockwise. Each boundary loop lists its vertices in
/// traversal order with the domain on the left, so outer loops run
/// counterclockwise and hole loops clockwise.
///
/// `reference` holds every vertex's position in the parameter domain it was
/// generated in (the plane itself for polar meshes, the unit disk for mapped
/// meshes) and `placement` sends reference positions to the plane. Loops with
/// a positive `loop_radius` lie on the reference circle of that radius; refine()
/// reprojects new boundary nodes onto it.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<std::vector<int>> boundary_loops;
  double resolution_h = 0.0;

  std::vector<Vec2> reference;
  std::vector<double> loop_radius;
  std::function<Vec2(Vec2)> placement;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Disk of the given radius centered at the origin, built from rings of
/// nodes at uniformly spaced radii. resolution_h <= target_h.
Mesh mesh_disk(double radius, double target_h);

/// Annulus r_in < |x| < r_out. One outer loop and one hole loop.
Mesh mesh_annulus(double r_in, double r_out, double target_h);

/// Polar ring mesh whose rings include every radius in `breakpoints`
/// (strictly increasing; a leading 0 gives a disk, otherwise an annulus).
/// Every interval between breakpoints is split uniformly.
Mesh mesh_polar(const std::vector<double>& breakpoints, double target_h);

/// Image of a unit-disk mesh under a univalent map. Rejects maps that fail
/// univalence_check with std::invalid_argument.
Mesh mesh_mapped_disk(const ConformalMap& map, double target_h);

/// Uniform 1-to-4 split. Boundary midpoints are reprojected onto the
/// reference circle of their loop and all vertices are re-placed.
Mesh refine(const Mesh& mesh);

/// Builds a mesh from raw triangles, orienting them counterclockwise and
/// extracting the boundary loops from edge topology. No analytic boundary.
Mesh mesh_from_triangles(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

/// Vertices scaled about the origin by `factor`, topology unchanged.
Mesh scale_mesh(const Mesh& mesh, double factor);

struct SubMesh {
  Mesh mesh;
  std::vector<int> parent_vertex;    // submesh vertex -> parent vertex
  std::vector<int> parent_triangle;  // submesh triangle -> parent triangle
};

/// Triangles of `mesh` for which `keep(triangle_index)` holds, with boundary
/// loops recomputed from topology.
SubMesh submesh(const Mesh& mesh, const std::function<bool(int)>& keep);

struct MeshTopology {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  std::size_t outer_loops = 0;
  std::size_t hole_loops = 0;
  long euler() const { return long(vertices) - long(edges) + long(faces); }
};

MeshTopology topology(const Mesh& mesh);

/// Empty string when every structural invariant holds, otherwise a
/// description of the first violation found.
std::string validate(const Mesh& mesh);

double triangle_area(const Mesh& mesh, int t);
double mesh_area(const Mesh& mesh);
double longest_edge(const Mesh& mesh);

std::vector<Vec2> loop_points(const Mesh& mesh, int loop);
double loop_signed_area(const Mesh& mesh, int loop);
bool is_hole_loop(const Mesh& mesh, int loop);
double boundary_length(const Mesh& mesh);

/// true for vertices lying on a boundary loop.
std::vector<bool> boundary_mask(const Mesh& mesh);

/// FNV-1a over vertex coordinates and triangle indices.
std::uint64_t mesh_checksum(const Mesh& mesh);

/// "V E F k" header, V lines "x y", F lines "i j k", then one line per loop.
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace liouville
