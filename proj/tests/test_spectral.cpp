#include <gtest/gtest.h>

#include <cmath>

#include "liouville/mesh.hpp"
#include "liouville/spectral.hpp"
#include "oracles.hpp"

using namespace liouville;
using oracle::pi;

namespace {

MeshPtr share(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

ScalarField U_on(MeshPtr m, double lambda) {
  return sample(m, [lambda](Vec2 x) { return u_lambda(lambda, x); });
}

double sup_distance_normalized(const ScalarField& phi, const std::function<double(Vec2)>& ref) {
  double top = 0.0, ref_top = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    top = std::max(top, phi[i]);
    ref_top = std::max(ref_top, ref(phi.domain().vertices[i]));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    d = std::max(d, std::abs(phi[i] * ref_top / top - ref(phi.domain().vertices[i])));
  return d / ref_top;
}

}  // namespace

TEST(Spectral, ElementStiffnessOfUnitRightTriangle) {
  const auto k = element_stiffness({0, 0}, {1, 0}, {0, 1});
  EXPECT_DOUBLE_EQ(k[0][0], 1.0);
  EXPECT_DOUBLE_EQ(k[1][1], 0.5);
  EXPECT_DOUBLE_EQ(k[1][2], 0.0);
  EXPECT_DOUBLE_EQ(k[0][1], -0.5);
  for (const auto& row : k) EXPECT_NEAR(row[0] + row[1] + row[2], 0.0, 1e-15);
}

TEST(Spectral, WeightedMassOfZeroWeightIsArea) {
  auto m = share(mesh_disk(1.0, 0.1));
  const auto M = assemble_weighted_mass(constant_field(m, 0.0));
  const std::vector<double> ones(m->vertex_count(), 1.0);
  EXPECT_NEAR(quadratic_form(M.full, ones), mesh_area(*m), 1e-12);
  const auto K = assemble_stiffness(*m);
  EXPECT_NEAR(quadratic_form(K.full, ones), 0.0, 1e-12);
  EXPECT_EQ(K.interior.rows(), static_cast<Eigen::Index>(K.interior_nodes.size()));
}

TEST(Spectral, EqualityCaseOnDiskOfRadiusSqrt8) {
  auto m = share(mesh_disk(std::sqrt(8.0), 0.05));
  const EigenPair p0 = first_eigenpair(U_on(m, 1.0));
  EXPECT_LE(std::abs(p0.nu_hat), 5e-3);
  const auto psi = [](Vec2 x) { return (8 - dot(x, x)) / (8 + dot(x, x)); };
  EXPECT_LE(sup_distance_normalized(p0.eigenfunction, psi), 1e-2);
  EXPECT_LT(p0.residual_norm, 1e-8);

  auto fine = share(refine(*m));
  const EigenPair p1 = first_eigenpair(U_on(fine, 1.0));
  EXPECT_LE(std::abs(p1.nu_hat), 1.5e-3);
  EXPECT_GT(std::abs(p0.nu_hat) / std::abs(p1.nu_hat), 3.0);
}

TEST(Spectral, EigenfunctionIsNormalizedAndPositive) {
  auto m = share(mesh_disk(1.0, 0.1));
  const ScalarField w = constant_field(m, 0.4);
  const EigenPair p = first_eigenpair(w);
  const auto M = assemble_weighted_mass(w);
  EXPECT_NEAR(quadratic_form(M.full, p.eigenfunction.values), 1.0, 1e-10);
  const auto bnd = boundary_mask(*m);
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    if (bnd[i]) EXPECT_EQ(p.eigenfunction[i], 0.0);
    else EXPECT_GT(p.eigenfunction[i], 0.0);
  }
  EXPECT_DOUBLE_EQ(p.nu_hat, p.nu - 1.0);
}

TEST(Spectral, ConstantWeightDiskMatchesBesselZero) {
  auto m = share(mesh_disk(1.0, 0.05));
  const EigenPair p = first_eigenpair(constant_field(m, std::log(4.0)));
  const double j0 = oracle::bessel_j0_first_zero();
  EXPECT_NEAR(j0, 2.404826, 1e-6);
  EXPECT_NEAR(p.nu_hat, j0 * j0 / 4 - 1, 1e-2);
}

TEST(Spectral, AnnulusMatchesBesselCrossProduct) {
  auto m = share(mesh_annulus(1.0, 2.0, 0.05));
  const double c = std::log(4.0 / 3.0);
  const EigenPair p = first_eigenpair(constant_field(m, c));
  const double k = oracle::annulus_first_wavenumber(1.0, 2.0);
  const double expected = k * k / std::exp(c) - 1.0;
  EXPECT_NEAR(p.nu_hat / expected, 1.0, 5e-3);
  EXPECT_GT(p.nu_hat, 0.1);
}

TEST(Spectral, ThresholdSweepMatchesRadialOracle) {
  auto m = share(mesh_disk(1.0, 0.05));
  double prev = 1e9;
  for (double k : {2.0, 3.0, 3.8, 4.0}) {
    const double mass = k * pi;
    const double lambda = std::sqrt(8 * mass / (8 * pi - mass));
    const EigenPair p = first_eigenpair(U_on(m, lambda));
    const double nu = oracle::radial_first_eigenvalue([lambda](double r) { return oracle::U(lambda, r); }, 1.0);
    EXPECT_NEAR(p.nu, nu, 5e-3 * nu) << k;
    EXPECT_LT(p.nu_hat, prev);
    prev = p.nu_hat;
    if (k < 4.0) EXPECT_GT(p.nu_hat, 0.0);
    else EXPECT_LE(std::abs(p.nu_hat), 5e-3);
  }
}

TEST(Spectral, GaugeLeavesEigenvalueUnchanged) {
  auto m = share(mesh_disk(1.0, 0.1));
  const ScalarField w = U_on(m, 2.0);
  const double nu = first_eigenpair(w).nu;
  for (double c : {-1.0, 0.5, 2.0}) EXPECT_NEAR(first_eigenpair(normalize_gauge(w, c)).nu, nu, 1e-8);
}

TEST(Spectral, StallsWhenIterationBudgetIsTooSmall) {
  auto m = share(mesh_disk(1.0, 0.1));
  EigenOptions opts;
  opts.max_iter = 1;
  EXPECT_THROW(first_eigenpair(U_on(m, 2.0), opts), IterationStalled);
}
