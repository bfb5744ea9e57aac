#include "liouville/rearrange.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "liouville/spectral.hpp"

namespace liouville {
namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

// Five-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGaussX{0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842,
                                        0.953089922969332};
constexpr std::array<double, 5> kGaussW{0.118463442528095, 0.239314335249683, 0.284444444444444,
                                        0.239314335249683, 0.118463442528095};

}  // namespace

double equivalent_radius(double mass) {
  if (!(mass >= 0.0) || mass >= kEightPi) throw std::invalid_argument("mass must lie in [0, 8 pi)");
  return std::sqrt(8.0 * mass / (kEightPi - mass));
}

double reference_disk_mass(double r) { return kEightPi * r * r / (8.0 + r * r); }

double RearrangedField::operator()(double r) const {
  if (r >= radii.back()) return 0.0;
  const double s = r * r;
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - radii.begin());
  const double s0 = radii[j - 1] * radii[j - 1], s1 = radii[j] * radii[j];
  if (s1 == s0) return values[j];
  return values[j - 1] + (values[j] - values[j - 1]) * (s - s0) / (s1 - s0);
}

double RearrangedField::radius_at(double t) const {
  if (t >= values.front()) return 0.0;
  if (t <= 0.0) return radii.back();
  // values nonincreasing: first knot with value <= t
  std::size_t j = 1;
  while (j < values.size() && values[j] > t) ++j;
  const double s0 = radii[j - 1] * radii[j - 1], s1 = radii[j] * radii[j];
  const double v0 = values[j - 1], v1 = values[j];
  const double s = v0 == v1 ? s0 : s0 + (s1 - s0) * (v0 - t) / (v0 - v1);
  return std::sqrt(s);
}

std::vector<double> isotonic_nonincreasing(const std::vector<double>& values) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.count >= b.sum / b.count) break;
      const Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / b.count);
  return out;
}

std::vector<double> interior_levels(const ScalarField& phi, int n_levels) {
  if (n_levels < 1) throw std::invalid_argument("need at least one level");
  const double t_max = *std::max_element(phi.values.begin(), phi.values.end());
  std::vector<double> t(n_levels);
  for (int k = 0; k < n_levels; ++k) t[k] = t_max * (k + 1) / (n_levels + 1);
  return t;
}

RearrangedField rearrange(const ScalarField& phi, const ScalarField& w, int n_levels) {
  const auto on_boundary = boundary_mask(phi.domain());
  const double t_max = *std::max_element(phi.values.begin(), phi.values.end());
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    if (phi[i] < 0.0) throw std::invalid_argument("rearrangement needs a nonnegative field");
    if (on_boundary[i] && phi[i] > 1e-12 * t_max)
      throw std::invalid_argument("rearrangement needs a zero boundary trace");
  }

  RearrangedField out;
  out.total_mass = total_mass(w);
  out.radius_R0 = equivalent_radius(out.total_mass);

  const auto requested = interior_levels(phi, n_levels);
  const auto prof = level_profile(phi, w, requested);
  out.levels = prof.levels;
  out.masses = isotonic_nonincreasing(prof.mass);
  for (double m : out.masses) out.level_radii.push_back(equivalent_radius(std::min(m, out.total_mass)));

  out.radii.push_back(0.0);
  out.values.push_back(t_max);
  for (std::size_t k = out.levels.size(); k-- > 0;) {
    out.radii.push_back(out.level_radii[k]);
    out.values.push_back(out.levels[k]);
  }
  out.radii.push_back(out.radius_R0);
  out.values.push_back(0.0);
  return out;
}

double dirichlet_energy(const ScalarField& field) {
  return quadratic_form(assemble_stiffness(field.domain()).full, field.values);
}

double radial_dirichlet_energy(const RearrangedField& f) {
  double e = 0.0;
  for (std::size_t j = 1; j < f.radii.size(); ++j) {
    const double s0 = f.radii[j - 1] * f.radii[j - 1], s1 = f.radii[j] * f.radii[j];
    if (s1 <= s0) continue;
    const double b = (f.values[j] - f.values[j - 1]) / (s1 - s0);
    e += 2.0 * std::numbers::pi * b * b * (s1 * s1 - s0 * s0);
  }
  return e;
}

double radial_weighted_norm(const RearrangedField& f) {
  double n = 0.0;
  for (std::size_t j = 1; j < f.radii.size(); ++j) {
    const double s0 = f.radii[j - 1] * f.radii[j - 1], s1 = f.radii[j] * f.radii[j];
    if (s1 <= s0) continue;
    double acc = 0.0;
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double s = s0 + kGaussX[q] * (s1 - s0);
      const double v = f.values[j - 1] + (f.values[j] - f.values[j - 1]) * kGaussX[q];
      const double weight = 1.0 / ((1.0 + s / 8.0) * (1.0 + s / 8.0));
      acc += kGaussW[q] * weight * v * v;
    }
    n += std::numbers::pi * acc * (s1 - s0);
  }
  return n;
}

double weighted_norm(const ScalarField& phi, const ScalarField& w) {
  return quadratic_form(assemble_weighted_mass(w).full, phi.values);
}

ChainReport rayleigh_chain_report(const ScalarField& phi, const ScalarField& w, int n_levels) {
  ChainReport rep;
  rep.min_cs_ratio = rep.min_bol_ratio = std::numeric_limits<double>::infinity();
  for (double t : interior_levels(phi, n_levels)) {
    const LevelSet ls = level_set(phi, w, t);
    ChainLevel row;
    row.t = ls.t;
    row.mass = ls.mass;
    row.ell = ls.ell;
    row.flux = ls.flux;
    row.mass_slope = ls.coarea_weight;
    row.cs_ratio = row.flux * row.mass_slope / (row.ell * row.ell) - 1.0;
    row.bol_ratio = row.ell * row.ell / (0.5 * row.mass * (kEightPi - row.mass)) - 1.0;
    rep.min_cs_ratio = std::min(rep.min_cs_ratio, row.cs_ratio);
    rep.min_bol_ratio = std::min(rep.min_bol_ratio, row.bol_ratio);
    rep.levels.push_back(row);
  }

  const RearrangedField star = rearrange(phi, w, n_levels);
  const double n = weighted_norm(phi, w);
  rep.original_gap = (dirichlet_energy(phi) - n) / n;
  rep.rearranged_gap = (radial_dirichlet_energy(star) - radial_weighted_norm(star)) / n;
  rep.radius_R0 = star.radius_R0;
  return rep;
}

}  // namespace liouville
