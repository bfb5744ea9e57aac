#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "liouville/mesh.hpp"

namespace liouville {

/// Nodal values over a mesh, interpreted piecewise linearly.
struct ScalarField {
  MeshPtr mesh;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(MeshPtr m, std::vector<double> v);

  const Mesh& domain() const { return *mesh; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Samples `f` at every vertex.
ScalarField sample(MeshPtr mesh, const std::function<double(Vec2)>& f);
ScalarField constant_field(MeshPtr mesh, double value);

/// U_lambda(x) = 2 ln(lambda) - 2 ln(1 + lambda^2 |x|^2 / 8).
double u_lambda(double lambda, Vec2 x);
std::vector<double> u_lambda(double lambda, std::span<const Vec2> points);

/// Closed-form integrals of e^{U_lambda} over B_delta and of e^{U_lambda/2} over its boundary.
double u_lambda_disk_mass(double lambda, double delta);
double u_lambda_circle_weight(double lambda, double delta);

/// Integral of e^{w} over the mesh with w interpolated linearly and the
/// exponential evaluated at 7-point quadrature nodes.
double total_mass(const ScalarField& w);
/// Integral of e^{w/2} along every boundary loop (2-point Gauss per edge).
double boundary_weight(const ScalarField& w);
/// Mesh quadrature of an analytic integrand.
double integrate(const Mesh& mesh, const std::function<double(Vec2)>& f);

/// Lumped (row-sum) mass of each vertex: a third of the area of its triangles.
std::vector<double> lumped_mass(const Mesh& mesh);

/// -Delta_h w at every vertex: stiffness action divided by the lumped mass.
/// Boundary entries are meaningful only for closed surfaces; callers use the
/// interior ones.
std::vector<double> discrete_minus_laplacian(const ScalarField& w);

struct SubsolutionReport {
  std::vector<double> residual;  // -Delta_h w - e^w per vertex, 0 on the boundary
  double max_residual = 0.0;     // over interior vertices
  double tolerance = 0.0;
  bool is_subsolution = false;   // max_residual <= tolerance
  double total_mass = 0.0;
};

/// 10 h^2 max(e^w): the consistency budget of the discrete Laplacian.
double default_subsolution_tolerance(const ScalarField& w);

SubsolutionReport liouville_residual(const ScalarField& w, double tolerance);

class NewtonDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NewtonOptions {
  int max_iter = 50;
  double newton_tol = 1e-10;   // max-norm of the interior residual
  int max_halvings = 30;
  double blowup = 1e3;         // nodal magnitude treated as divergence
};

/// Solves -Delta_h w = e^w in the interior with w fixed on the boundary.
/// `boundary_values` has one entry per vertex; only boundary entries are used.
/// Starts from the harmonic lifting of the boundary data and halves Newton
/// steps until the residual decreases. Throws NewtonDiverged.
ScalarField solve_liouville_dirichlet(MeshPtr mesh, std::span<const double> boundary_values,
                                      const NewtonOptions& options = {});

/// Harmonic extension of the boundary entries of `boundary_values`.
ScalarField harmonic_lifting(MeshPtr mesh, std::span<const double> boundary_values);

/// Solves -Delta_h v = rhs (interior, lumped) with v = 0 on the boundary.
ScalarField solve_poisson_zero_trace(MeshPtr mesh, std::span<const double> rhs);

/// w_c(x) = w(e^{-c/2} x) - c on the mesh scaled by e^{c/2}.
ScalarField normalize_gauge(const ScalarField& w, double c);

/// Mesh checksum line followed by one nodal value per line.
void write_field(std::ostream& out, const ScalarField& w);

}  // namespace liouville
