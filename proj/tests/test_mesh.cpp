#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "liouville/levelset.hpp"
#include "liouville/mesh.hpp"

using namespace liouville;
constexpr double kPi = std::numbers::pi;

TEST(Mesh, DiskIsValidAndResolved) {
  const Mesh m = mesh_disk(1.0, 0.1);
  EXPECT_EQ(validate(m), "");
  EXPECT_LE(m.resolution_h, 0.1);
  EXPECT_LE(longest_edge(m), 0.1 * 1.5);
  EXPECT_EQ(m.boundary_loops.size(), 1u);
  EXPECT_EQ(topology(m).euler(), 1);
  // Inscribed polygon area converges to pi from below.
  EXPECT_LT(mesh_area(m), kPi);
  EXPECT_NEAR(mesh_area(m), kPi, 4e-3);
}

TEST(Mesh, AnnulusHasOneHole) {
  const Mesh m = mesh_annulus(1.0, 2.0, 0.1);
  EXPECT_EQ(validate(m), "");
  ASSERT_EQ(m.boundary_loops.size(), 2u);
  int holes = 0;
  for (int l = 0; l < 2; ++l) holes += is_hole_loop(m, l);
  EXPECT_EQ(holes, 1);
  EXPECT_EQ(topology(m).euler(), 0);
  EXPECT_EQ(topology(m).hole_loops, 1u);
  EXPECT_NEAR(mesh_area(m), 3.0 * kPi, 1e-2);
  EXPECT_NEAR(boundary_length(m), 6.0 * kPi, 1e-2);
}

TEST(Mesh, PolarBreakpointsAreRings) {
  const Mesh m = mesh_polar({0.0, 0.8, 1.2, 2.0}, 0.1);
  EXPECT_EQ(validate(m), "");
  for (double r : {0.8, 1.2}) {
    int on_ring = 0;
    for (const auto& v : m.vertices) on_ring += std::abs(norm(v) - r) < 1e-12;
    EXPECT_GT(on_ring, 20) << r;
  }
}

TEST(Mesh, RefinementQuartersTrianglesAndStaysOnCircle) {
  const Mesh m = mesh_disk(1.0, 0.2);
  const Mesh f = refine(m);
  EXPECT_EQ(validate(f), "");
  EXPECT_EQ(f.triangle_count(), 4 * m.triangle_count());
  EXPECT_LE(f.resolution_h, 0.55 * m.resolution_h);
  for (int v : f.boundary_loops[0]) EXPECT_NEAR(norm(f.vertices[v]), 1.0, 1e-12);
  // Area error of the inscribed polygon drops about fourfold.
  const double e0 = kPi - mesh_area(m), e1 = kPi - mesh_area(f);
  EXPECT_NEAR(e0 / e1, 4.0, 0.3);
}

TEST(Mesh, MappedDiskArea) {
  const Mesh m = mesh_mapped_disk(parse_map("poly:1,0.3"), 0.05);
  EXPECT_EQ(validate(m), "");
  // Area of the image of the disk under z + a z^2 is pi (1 + 2 a^2).
  EXPECT_NEAR(mesh_area(m), 1.18 * kPi, 5e-3);
}

TEST(Mesh, MappedDiskRejectsNonUnivalentMap) {
  EXPECT_THROW(mesh_mapped_disk(parse_map("poly:1,0.6"), 0.1), std::invalid_argument);
}

TEST(Mesh, RejectsBadArguments) {
  EXPECT_THROW(mesh_disk(-1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(mesh_annulus(2.0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(mesh_polar({0.0, 1.0, 0.5}, 0.1), std::invalid_argument);
}

TEST(Mesh, SubmeshKeepsParentMaps) {
  const Mesh m = mesh_polar({0.0, 1.0, 2.0}, 0.1);
  const SubMesh s = submesh(m, [&](int t) {
    const auto& tri = m.triangles[t];
    return norm((1.0 / 3.0) * (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]])) > 1.0;
  });
  EXPECT_EQ(validate(s.mesh), "");
  EXPECT_EQ(s.mesh.boundary_loops.size(), 2u);
  for (std::size_t v = 0; v < s.mesh.vertex_count(); ++v)
    EXPECT_EQ(s.mesh.vertices[v].x, m.vertices[s.parent_vertex[v]].x);
  EXPECT_NEAR(mesh_area(s.mesh), 3.0 * kPi, 2e-2);
}

TEST(Mesh, ChecksumIsDeterministicAndSensitive) {
  EXPECT_EQ(mesh_checksum(mesh_disk(1.0, 0.1)), mesh_checksum(mesh_disk(1.0, 0.1)));
  EXPECT_NE(mesh_checksum(mesh_disk(1.0, 0.1)), mesh_checksum(mesh_disk(1.0, 0.09)));
}

TEST(Mesh, DumpFormatHeader) {
  const Mesh m = mesh_annulus(1.0, 2.0, 0.3);
  std::ostringstream out;
  write_mesh(out, m);
  std::istringstream in(out.str());
  std::size_t v, e, f, k;
  in >> v >> e >> f >> k;
  EXPECT_EQ(v, m.vertex_count());
  EXPECT_EQ(e, topology(m).edges);
  EXPECT_EQ(f, m.triangle_count());
  EXPECT_EQ(k, m.boundary_loops.size());
}

TEST(Mesh, SquareIsoperimetricDefect) {
  const Mesh sq = mesh_from_triangles({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, {{0, 1, 2}, {0, 2, 3}});
  EXPECT_EQ(validate(sq), "");
  EXPECT_NEAR(isoperimetric_defect(sq), 64.0 - 16.0 * kPi, 1e-12);
}

TEST(Mesh, DiskIsoperimetricDefectVanishes) {
  const Mesh m = mesh_disk(1.0, 0.05);
  EXPECT_GE(isoperimetric_defect(m), 0.0);
  EXPECT_LT(isoperimetric_defect(m) / (4.0 * kPi * kPi), 1e-3);
}
