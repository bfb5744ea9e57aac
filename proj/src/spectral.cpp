#include "liouville/spectral.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace liouville {
namespace {

using Vector = Eigen::VectorXd;

DirichletOperator finish(const Mesh& mesh, std::vector<Eigen::Triplet<double>>& triplets) {
  DirichletOperator op;
  const int n = static_cast<int>(mesh.vertices.size());
  op.full.resize(n, n);
  op.full.setFromTriplets(triplets.begin(), triplets.end());

  const auto on_boundary = boundary_mask(mesh);
  op.unknown_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (on_boundary[v]) continue;
    op.unknown_of[v] = static_cast<int>(op.interior_nodes.size());
    op.interior_nodes.push_back(v);
  }
  std::vector<Eigen::Triplet<double>> inner;
  inner.reserve(op.full.nonZeros());
  for (int col = 0; col < op.full.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(op.full, col); it; ++it) {
      const int i = op.unknown_of[it.row()], j = op.unknown_of[it.col()];
      if (i >= 0 && j >= 0) inner.emplace_back(i, j, it.value());
    }
  const int m = static_cast<int>(op.interior_nodes.size());
  op.interior.resize(m, m);
  op.interior.setFromTriplets(inner.begin(), inner.end());
  return op;
}

}  // namespace

std::array<std::array<double, 3>, 3> element_stiffness(Vec2 a, Vec2 b, Vec2 c) {
  const double twice_area = orient2d(a, b, c);
  if (!(std::abs(twice_area) > 0.0)) throw std::invalid_argument("degenerate triangle in assembly");
  const std::array<Vec2, 3> opposite{c - b, a - c, b - a};
  std::array<std::array<double, 3>, 3> k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k[i][j] = dot(opposite[i], opposite[j]) / (2.0 * std::abs(twice_area));
  return k;
}

DirichletOperator assemble_stiffness(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    const auto k = element_stiffness(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.emplace_back(t[i], t[j], k[i][j]);
  }
  return finish(mesh, triplets);
}

DirichletOperator assemble_weighted_mass(const ScalarField& w) {
  const Mesh& mesh = w.domain();
  const auto& rule = degree5_rule();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = triangle_area(mesh, t);
    std::array<std::array<double, 3>, 3> m{};
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.bary[q];
      const double wq = l[0] * w[tri[0]] + l[1] * w[tri[1]] + l[2] * w[tri[2]];
      const double s = rule.weight[q] * area * std::exp(wq);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += s * l[i] * l[j];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.emplace_back(tri[i], tri[j], m[i][j]);
  }
  return finish(mesh, triplets);
}

double quadratic_form(const SparseMatrix& a, const std::vector<double>& v) {
  const Eigen::Map<const Vector> x(v.data(), static_cast<Eigen::Index>(v.size()));
  return x.dot(a * x);
}

EigenPair first_eigenpair(const DirichletOperator& stiffness, const DirichletOperator& mass,
                          MeshPtr mesh, const EigenOptions& options) {
  const SparseMatrix& k = stiffness.interior;
  const SparseMatrix& m = mass.interior;
  const Eigen::Index n = k.rows();
  if (n == 0) throw std::invalid_argument("mesh has no interior vertices");

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.compute(k);
  cg.setTolerance(std::clamp(1e-3 * options.tol, 1e-15, 1e-12));
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * n));

  Vector x = Vector::Ones(n);
  x /= std::sqrt(x.dot(m * x));
  Vector y = Vector::Zero(n);
  double nu = 0.0, residual = 0.0;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const Vector b = m * x;
    if (nu > 0.0)
      y = cg.solveWithGuess(b, Vector(x / nu));
    else
      y = cg.solve(b);
    y /= std::sqrt(y.dot(m * y));
    const Vector ky = k * y, my = m * y;
    nu = y.dot(ky);
    residual = (ky - nu * my).norm() / my.norm();
    x = y;
    if (residual <= options.tol) break;
  }
  if (residual > options.tol)
    throw IterationStalled("inverse iteration stalled at residual " + std::to_string(residual));

  if (x.sum() < 0.0) x = -x;
  std::vector<double> phi(mesh->vertices.size(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) phi[stiffness.interior_nodes[i]] = x[i];

  EigenPair pair;
  pair.nu = nu;
  pair.nu_hat = nu - 1.0;
  pair.eigenfunction = ScalarField(std::move(mesh), std::move(phi));
  pair.residual_norm = residual;
  pair.iterations = iter + 1;
  return pair;
}

EigenPair first_eigenpair(const ScalarField& w, const EigenOptions& options) {
  const auto k = assemble_stiffness(w.domain());
  const auto m = assemble_weighted_mass(w);
  return first_eigenpair(k, m, w.mesh, options);
}

}  // namespace liouville
