#pragma once

#include <vector>

#include "liouville/levelset.hpp"

namespace liouville {

/// Radius R with 8 pi R^2 / (8 + R^2) = mass, the e^U-mass of B_R.
/// Rejects mass outside [0, 8 pi).
double equivalent_radius(double mass);
/// Integral of e^U over B_r.
double reference_disk_mass(double r);

/// Radial decreasing rearrangement of phi with respect to e^w dx and e^U dx.
///
/// Knots (r_j, phi*(r_j)) run from (0, t_max) to (R0, 0); between knots phi*
/// is linear in r^2, which is exact for the profiles with m(t) linear in t.
struct RearrangedField {
  double radius_R0 = 0.0;
  double total_mass = 0.0;
  std::vector<double> radii;   // increasing, radii.front() = 0, radii.back() = R0
  std::vector<double> values;  // nonincreasing, values.back() = 0
  std::vector<double> levels;  // sampled levels t_k of the source field
  std::vector<double> masses;  // m(t_k) after the isotonic projection
  std::vector<double> level_radii;  // R(t_k)

  /// phi*(r); 0 beyond R0.
  double operator()(double r) const;
  /// Smallest r with phi*(r) <= t, for 0 < t < t_max.
  double radius_at(double t) const;
};

/// Nonincreasing least-squares projection (pool adjacent violators).
std::vector<double> isotonic_nonincreasing(const std::vector<double>& values);

/// Levels t_max k / (n + 1), k = 1 .. n.
std::vector<double> interior_levels(const ScalarField& phi, int n_levels);

/// phi >= 0 with zero trace; total mass of w below 8 pi.
RearrangedField rearrange(const ScalarField& phi, const ScalarField& w, int n_levels = 200);

/// phi^T K phi with the linear-element stiffness.
double dirichlet_energy(const ScalarField& field);
/// 2 pi times the integral of phi*'(r)^2 r dr.
double radial_dirichlet_energy(const RearrangedField& field);
/// 2 pi times the integral of e^U phi*^2 r dr.
double radial_weighted_norm(const RearrangedField& field);
/// phi^T M phi with the e^w-weighted mass matrix.
double weighted_norm(const ScalarField& phi, const ScalarField& w);

struct ChainLevel {
  double t = 0.0;
  double mass = 0.0;
  double ell = 0.0;
  double flux = 0.0;         // integral of |grad phi| over the level curve
  double mass_slope = 0.0;   // -dm/dt from the co-area formula
  double cs_ratio = 0.0;     // flux (-dm/dt) / ell^2 - 1, >= 0
  double bol_ratio = 0.0;    // ell^2 / (m (8 pi - m) / 2) - 1, >= 0
};

/// Per-level Cauchy-Schwarz and Bol steps and the endpoint energy comparison.
/// Energies enter as ratios to the weighted norm of phi, so the report is
/// unchanged when phi is scaled.
struct ChainReport {
  std::vector<ChainLevel> levels;
  double min_cs_ratio = 0.0;
  double min_bol_ratio = 0.0;
  double rearranged_gap = 0.0;  // (E* - N*) / N
  double original_gap = 0.0;    // (E - N) / N = nu_1 - 1 by the Rayleigh quotient
  double radius_R0 = 0.0;
};

ChainReport rayleigh_chain_report(const ScalarField& phi, const ScalarField& w, int n_levels = 200);

}  // namespace liouville
