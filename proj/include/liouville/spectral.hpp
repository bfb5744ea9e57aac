#pragma once

#include <Eigen/Sparse>
#include <array>
#include <stdexcept>
#include <vector>

#include "liouville/fields.hpp"

namespace liouville {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// A symmetric operator on all vertices together with its restriction to the
/// interior (Dirichlet) unknowns.
struct DirichletOperator {
  SparseMatrix full;
  SparseMatrix interior;
  std::vector<int> interior_nodes;  // interior unknown -> vertex
  std::vector<int> unknown_of;      // vertex -> interior unknown, -1 on the boundary
};

/// Cotangent element matrix of the linear element on (a, b, c).
std::array<std::array<double, 3>, 3> element_stiffness(Vec2 a, Vec2 b, Vec2 c);

/// Linear-element stiffness matrix. Throws std::invalid_argument on a
/// degenerate triangle.
DirichletOperator assemble_stiffness(const Mesh& mesh);

/// Consistent mass matrix for the weight e^{w}: e^{w} is evaluated at
/// quadrature nodes from the linear interpolant of w.
DirichletOperator assemble_weighted_mass(const ScalarField& w);

struct EigenPair {
  double nu = 0.0;        // smallest eigenvalue of K phi = nu M phi
  double nu_hat = 0.0;    // nu - 1
  ScalarField eigenfunction;  // zero on the boundary, phi^T M phi = 1, positive interior mean
  double residual_norm = 0.0; // |K phi - nu M phi| / |M phi|
  int iterations = 0;
};

class IterationStalled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 400;
};

/// Smallest generalized eigenpair by inverse iteration (shift 0) with
/// Jacobi-preconditioned CG inner solves, started from all ones.
EigenPair first_eigenpair(const DirichletOperator& stiffness, const DirichletOperator& mass,
                          MeshPtr mesh, const EigenOptions& options = {});

/// Assembles both operators for (mesh of w, e^w) and returns the first pair.
EigenPair first_eigenpair(const ScalarField& w, const EigenOptions& options = {});

/// Full-vector quadratic form v^T A v.
double quadratic_form(const SparseMatrix& a, const std::vector<double>& v);

}  // namespace liouville
