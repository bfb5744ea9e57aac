#include <gtest/gtest.h>

#include <cmath>

#include "liouville/levelset.hpp"
#include "liouville/mesh.hpp"
#include "oracles.hpp"

using namespace liouville;
using oracle::pi;

namespace {

MeshPtr share(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

ScalarField U_on(MeshPtr m, double lambda) {
  return sample(m, [lambda](Vec2 x) { return u_lambda(lambda, x); });
}

// Radius where U_lambda drops to t.
double radius_of_level(double lambda, double t) {
  return std::sqrt(8.0 * (lambda / std::exp(t / 2.0) - 1.0)) / lambda;
}

std::vector<bool> ring_triangles(const Mesh& m, double lo, double hi) {
  std::vector<bool> keep(m.triangle_count());
  for (std::size_t t = 0; t < keep.size(); ++t) {
    const auto& tri = m.triangles[t];
    const double r = norm((1.0 / 3.0) * (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]));
    keep[t] = r > lo && r < hi;
  }
  return keep;
}

}  // namespace

TEST(LevelSet, RadialLevelMatchesClosedForm) {
  auto m = share(mesh_disk(std::sqrt(8.0), 0.05));
  const ScalarField w = U_on(m, 1.0);
  for (double t : {-1.2, -0.8, -0.4}) {
    const LevelSet ls = level_set(w, w, t);
    const double r = radius_of_level(1.0, ls.t);
    EXPECT_NEAR(ls.mass / oracle::disk_mass(1.0, r), 1.0, 1e-3) << t;
    EXPECT_NEAR(ls.ell / (2 * pi * r * std::exp(ls.t / 2)), 1.0, 1e-3) << t;
    EXPECT_NEAR(ls.length / (2 * pi * r), 1.0, 1e-3);
    EXPECT_NEAR(ls.area / (pi * r * r), 1.0, 2e-3);
    // |U'(r)| = (r / 2) / (1 + r^2 / 8) for lambda = 1.
    EXPECT_NEAR(ls.flux / (2 * pi * r * (r / 2) / (1 + r * r / 8)), 1.0, 5e-3);
    EXPECT_EQ(ls.components, 1);
    EXPECT_EQ(ls.holes, 0);
  }
}

TEST(LevelSet, PerturbedLevelAvoidsNodalValues) {
  auto m = share(mesh_disk(1.0, 0.2));
  const ScalarField f = sample(m, [](Vec2 x) { return 1.0 - dot(x, x); });
  const double t = f[3];
  const double p = perturb_level(f, t);
  EXPECT_GT(p, t);
  EXPECT_LT(p - t, 1e-6);
  for (double v : f.values) EXPECT_NE(v, p);
}

TEST(LevelSet, WholeDomainLevelIsTheDomain) {
  auto m = share(mesh_disk(1.0, 0.05));
  const ScalarField w = U_on(m, std::sqrt(8.0));
  const ScalarField psi = sample(m, [](Vec2 x) { return 1.0 - dot(x, x); });
  const LevelSet ls = level_set(psi, w, -1.0);
  EXPECT_NEAR(ls.mass, total_mass(w), 1e-12 * total_mass(w));
  EXPECT_NEAR(ls.ell, boundary_weight(w), 1e-10);
}

class BolEquality : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(BolEquality, EveryLevelOfARadialDecreasingField) {
  const auto [radius, lambda] = GetParam();
  auto m = share(mesh_disk(radius, 0.05));
  const ScalarField w = U_on(m, lambda);
  const double scale = 64 * pi * pi;
  EXPECT_LE(std::abs(bol_defect(boundary_weight(w), total_mass(w))) / scale, 2e-3);
  const ScalarField phi = sample(m, [radius](Vec2 x) { return radius * radius - dot(x, x); });
  const auto prof = level_profile(phi, w, 25);
  int checked = 0;
  for (std::size_t k = 1; k + 1 < prof.levels.size(); ++k) {
    EXPECT_LE(std::abs(bol_defect(prof.ell[k], prof.mass[k])) / scale, 2e-3) << prof.levels[k];
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

INSTANTIATE_TEST_SUITE_P(Disks, BolEquality,
                         ::testing::Values(std::pair{std::sqrt(8.0), 1.0}, std::pair{1.0, std::sqrt(8.0)}));

TEST(LevelSet, BolDefectDomain) {
  EXPECT_DOUBLE_EQ(bol_defect(2.0, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(bol_defect(0.0, 4 * pi), -8 * pi * pi);
  EXPECT_THROW(bol_defect(1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(bol_defect(1.0, 8 * pi + 0.1), std::invalid_argument);
}

TEST(LevelSet, ConstantWeightIsStrict) {
  auto m = share(mesh_disk(1.0, 0.05));
  const ScalarField w = constant_field(m, std::log(4.0));
  // l = 4 pi and m = 4 pi, so the defect is 16 pi^2 - 8 pi^2.
  EXPECT_NEAR(bol_defect(boundary_weight(w), total_mass(w)), 8 * pi * pi, 0.2);
}

TEST(LevelSet, AnnularSuperlevelHasAHole) {
  auto m = share(mesh_disk(2.0, 0.05));
  const ScalarField f = sample(m, [](Vec2 x) {
    const double r = norm(x);
    return r * r * (4.0 - r * r);
  });
  const LevelSet ls = level_set(f, constant_field(m, 0.0), 2.0);
  EXPECT_EQ(ls.components, 1);
  EXPECT_EQ(ls.holes, 1);
  int holes = 0;
  for (const auto& loop : ls.loops)
    if (loop.signed_area < 0) {
      ++holes;
      EXPECT_GE(loop.parent, 0);
    }
  EXPECT_EQ(holes, 1);
  // r^2 (4 - r^2) > 2 on 2 - sqrt 2 < r^2 < 2 + sqrt 2.
  EXPECT_NEAR(ls.area, pi * 2 * std::sqrt(2.0), 2e-2);
}

TEST(LevelSet, TwoBumpsGiveTwoComponents) {
  auto m = share(mesh_disk(2.0, 0.05));
  const ScalarField f = sample(m, [](Vec2 x) {
    return std::exp(-8 * dot(x - Vec2{1, 0}, x - Vec2{1, 0})) + std::exp(-8 * dot(x + Vec2{1, 0}, x + Vec2{1, 0}));
  });
  const LevelSet ls = level_set(f, constant_field(m, 0.0), 0.5);
  EXPECT_EQ(ls.components, 2);
  EXPECT_EQ(ls.holes, 0);
  // Each piece is the disk |x - c|^2 < ln 2 / 8.
  EXPECT_NEAR(ls.area, 2 * pi * std::log(2.0) / 8, 5e-3);
}

TEST(LevelSet, CoareaWeightIsMinusMassSlope) {
  auto m = share(mesh_disk(1.0, 0.02));
  const ScalarField w = sample(m, [](Vec2 x) { return 0.5 * x.x; });
  const ScalarField f = sample(m, [](Vec2 x) { return 1.0 - dot(x, x) + 0.2 * x.y; });
  for (double t : {0.3, 0.6}) {
    const double dt = 1e-3;
    const double slope = -(level_set(f, w, t + dt).mass - level_set(f, w, t - dt).mass) / (2 * dt);
    EXPECT_NEAR(level_set(f, w, t).coarea_weight / slope, 1.0, 5e-3) << t;
  }
}

TEST(LevelSet, ProfileLevelsAndBase) {
  auto m = share(mesh_disk(1.0, 0.1));
  const ScalarField f = sample(m, [](Vec2 x) { return 1.0 - dot(x, x); });
  const ScalarField base = constant_field(m, 0.0);
  const auto prof = level_profile(f, constant_field(m, 1.0), 5, &base);
  ASSERT_EQ(prof.levels.size(), 5u);
  EXPECT_TRUE(prof.has_base);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(prof.mass[k], std::exp(1.0) * prof.base_mass[k], 1e-12);
  EXPECT_NEAR(prof.levels[2], 0.5 * prof.t_max, 1e-6);
  EXPECT_THROW(level_profile(f, f, 1), std::invalid_argument);
}

TEST(Huber, HarmonicFieldOracle) {
  auto m = share(mesh_disk(1.0, 0.025));
  const ScalarField h = sample(m, [](Vec2 x) { return x.x; });
  // On the unit disk: boundary integral 2 pi I0(1/2), area integral 2 pi I1(1).
  const double ell = 2 * pi * std::cyl_bessel_i(0.0, 0.5);
  const double expected = ell * ell - 4 * pi * 2 * pi * std::cyl_bessel_i(1.0, 1.0);
  EXPECT_GT(expected, 0.0);
  // The defect is a small difference of two terms of size ell^2.
  EXPECT_NEAR(huber_defect(h), expected, 1e-4 * ell * ell);
  EXPECT_GT(huber_defect(h), 0.0);
  EXPECT_TRUE(discretely_subharmonic(h));
  EXPECT_FALSE(discretely_subharmonic(sample(m, [](Vec2 x) { return -dot(x, x); })));
}

TEST(Huber, ConstantIsEquality) {
  auto m = share(mesh_disk(1.0, 0.05));
  EXPECT_NEAR(huber_defect(constant_field(m, 0.7)) / (16 * pi * pi), 0.0, 1e-3);
}

TEST(Decompose, SolutionHasConstantBase) {
  auto m = share(mesh_disk(1.0, 0.05));
  const ScalarField w = U_on(m, 2.0);
  const Decomposition d = decompose(w);
  const double trace = oracle::U(2.0, 1.0);
  const auto bnd = boundary_mask(*m);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    EXPECT_NEAR(d.h0[i], trace, 1e-9);
    EXPECT_NEAR(d.h[i], trace, 2e-3);
    EXPECT_GE(d.u[i], -1e-12);
    if (bnd[i]) EXPECT_NEAR(d.u[i], 0.0, 1e-12);
    EXPECT_NEAR(d.h0[i] + d.h_minus[i] + d.u[i], w[i], 1e-12);
  }
}

TEST(Decompose, ZeroWeightGivesTorsion) {
  auto m = share(mesh_disk(1.0, 0.05));
  const Decomposition d = decompose(constant_field(m, 0.0));
  double top = 0.0;
  for (std::size_t i = 0; i < d.u.values.size(); ++i) {
    EXPECT_LE(d.h_minus[i], 1e-12);
    EXPECT_NEAR(d.f[i], boundary_mask(*m)[i] ? d.f[i] : -1.0, 1e-12);
    top = std::max(top, d.u[i]);
  }
  EXPECT_NEAR(top, 0.25, 1e-3);
}

TEST(Extension, HatExtensionAcrossHole) {
  auto ambient = share(mesh_polar({0.0, 1.0, 2.0}, 0.05));
  const auto keep = ring_triangles(*ambient, 1.0, 3.0);
  const SubMesh sub = submesh(*ambient, [&](int t) { return keep[t]; });
  auto ring = share(sub.mesh);
  const auto bnd = boundary_mask(*ring);
  auto bump = [&](double sign) {
    std::vector<double> v(ring->vertex_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double r = norm(ring->vertices[i]);
      v[i] = bnd[i] ? 0.0 : sign * 0.3 * (r - 1) * (2 - r);
    }
    return ScalarField(ring, v);
  };
  const ScalarField good = extend_hat(bump(1.0), ambient);
  ASSERT_EQ(good.values.size(), ambient->vertex_count());
  for (std::size_t i = 0; i < good.values.size(); ++i)
    if (norm(ambient->vertices[i]) < 1.0 - 1e-9) EXPECT_EQ(good[i], 0.0);
  EXPECT_TRUE(weak_subsolution_check(good, default_subsolution_tolerance(good)).passed);
  const auto bad = weak_subsolution_check(extend_hat(bump(-1.0), ambient), 1e-3);
  EXPECT_FALSE(bad.passed);
  EXPECT_NEAR(norm(ambient->vertices[bad.worst_vertex]), 1.0, 1e-9);
}

TEST(Extension, RejectsNonzeroTraceAndForeignMesh) {
  auto ambient = share(mesh_polar({0.0, 1.0, 2.0}, 0.1));
  const auto keep = ring_triangles(*ambient, 1.0, 3.0);
  auto ring = share(submesh(*ambient, [&](int t) { return keep[t]; }).mesh);
  EXPECT_THROW(extend_hat(constant_field(ring, 1.0), ambient), std::invalid_argument);
  auto other = share(mesh_annulus(1.05, 1.9, 0.1));
  EXPECT_THROW(extend_hat(constant_field(other, 0.0), ambient), std::invalid_argument);
}

TEST(Extension, ExplicitSolutionIsWeakSubsolution) {
  auto m = share(mesh_disk(std::sqrt(8.0), 0.05));
  const ScalarField w = U_on(m, 1.0);
  EXPECT_TRUE(weak_subsolution_check(w, default_subsolution_tolerance(w)).passed);
}

TEST(Audit, AnnulusInAnnulusSmallUnionMass) {
  auto m = share(mesh_polar({1.0, 1.2, 1.8, 2.0}, 0.05));
  const auto rep = appendix_audit(constant_field(m, 0.0), ring_triangles(*m, 1.2, 1.8));
  EXPECT_EQ(rep.branch, AuditBranch::SmallUnionMass);
  EXPECT_TRUE(rep.all_ok);
  EXPECT_GT(rep.final_defect, 0.0);
  // Zero weight: filled omega is B_1.8 minus nothing of the ambient hole B_1.
  EXPECT_NEAR(rep.split.m_omega, pi * (1.8 * 1.8 - 1.2 * 1.2), 1e-2);
  EXPECT_EQ(rep.split.omega_zero.size(), 1u);
  EXPECT_EQ(rep.rows.back().name, "final_bol");
}

TEST(Audit, EnclosedHoleAndDisconnected) {
  auto m = share(mesh_polar({0.0, 0.8, 1.0, 1.2, 2.0, std::sqrt(8.0)}, 0.05));
  const ScalarField w = U_on(m, 1.0);
  const auto enclosed = appendix_audit(w, ring_triangles(*m, 1.0, 2.0));
  EXPECT_EQ(enclosed.branch, AuditBranch::EnclosedHoles);
  EXPECT_TRUE(enclosed.all_ok);
  EXPECT_GT(enclosed.final_defect, 0.0);

  auto inner = ring_triangles(*m, 0.0, 0.8), outer = ring_triangles(*m, 1.2, 2.0);
  for (std::size_t t = 0; t < inner.size(); ++t) inner[t] = inner[t] || outer[t];
  const auto split = appendix_audit(w, inner);
  EXPECT_EQ(split.branch, AuditBranch::Disconnected);
  EXPECT_TRUE(split.all_ok);
  EXPECT_GT(split.final_defect, 0.0);
}

TEST(Audit, RejectsSimplyConnectedOrTouchingOmega) {
  auto m = share(mesh_polar({0.0, 1.0, 2.0}, 0.1));
  const ScalarField w = constant_field(m, 0.0);
  EXPECT_THROW(appendix_audit(w, ring_triangles(*m, 0.0, 1.0)), std::invalid_argument);
  EXPECT_THROW(appendix_audit(w, ring_triangles(*m, 1.0, 3.0)), std::invalid_argument);
  EXPECT_THROW(appendix_audit(w, std::vector<bool>(m->triangle_count(), false)), std::invalid_argument);
}

TEST(Audit, BranchNames) {
  EXPECT_EQ(to_string(AuditBranch::LargeHoleMass), "large_hole_mass");
  EXPECT_EQ(to_string(AuditBranch::Disconnected), "disconnected");
}

TEST(Isoperimetric, SubmeshRing) {
  auto m = share(mesh_polar({0.0, 1.0, 2.0}, 0.05));
  const auto keep = ring_triangles(*m, 1.0, 3.0);
  const Mesh ring = submesh(*m, [&](int t) { return keep[t]; }).mesh;
  // Perimeter 6 pi, area 3 pi.
  EXPECT_NEAR(isoperimetric_defect(ring) / (24 * pi * pi), 1.0, 2e-3);
}
