#include "liouville/fields.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "liouville/spectral.hpp"

namespace liouville {
namespace {

using Vector = Eigen::VectorXd;

double max_abs_interior(const std::vector<double>& r, const std::vector<int>& interior) {
  double m = 0.0;
  for (int v : interior) m = std::max(m, std::abs(r[v]));
  return m;
}

}  // namespace

ScalarField::ScalarField(MeshPtr m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh) throw std::invalid_argument("field needs a mesh");
  if (values.size() != mesh->vertices.size())
    throw std::invalid_argument("field length differs from the vertex count");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("field has non-finite values");
}

ScalarField sample(MeshPtr mesh, const std::function<double(Vec2)>& f) {
  std::vector<double> v;
  v.reserve(mesh->vertices.size());
  for (const auto& p : mesh->vertices) v.push_back(f(p));
  return {std::move(mesh), std::move(v)};
}

ScalarField constant_field(MeshPtr mesh, double value) {
  const auto n = mesh->vertices.size();
  return {std::move(mesh), std::vector<double>(n, value)};
}

double u_lambda(double lambda, Vec2 x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return 2.0 * std::log(lambda) - 2.0 * std::log1p(lambda * lambda * dot(x, x) / 8.0);
}

std::vector<double> u_lambda(double lambda, std::span<const Vec2> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(u_lambda(lambda, p));
  return out;
}

double u_lambda_disk_mass(double lambda, double delta) {
  const double l2d2 = lambda * lambda * delta * delta;
  return std::numbers::pi * l2d2 / (1.0 + l2d2 / 8.0);
}

double u_lambda_circle_weight(double lambda, double delta) {
  return 2.0 * std::numbers::pi * delta * lambda / (1.0 + lambda * lambda * delta * delta / 8.0);
}

double total_mass(const ScalarField& w) {
  const Mesh& mesh = w.domain();
  const auto& rule = degree5_rule();
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.bary[q];
      acc += rule.weight[q] * std::exp(l[0] * w[tri[0]] + l[1] * w[tri[1]] + l[2] * w[tri[2]]);
    }
    s += acc * triangle_area(mesh, t);
  }
  return s;
}

double boundary_weight(const ScalarField& w) {
  const Mesh& mesh = w.domain();
  double s = 0.0;
  for (const auto& loop : mesh.boundary_loops) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i], b = loop[(i + 1) % loop.size()];
      const double len = norm(mesh.vertices[b] - mesh.vertices[a]);
      double acc = 0.0;
      for (double g : gauss2_nodes) acc += 0.5 * std::exp(0.5 * ((1.0 - g) * w[a] + g * w[b]));
      s += len * acc;
    }
  }
  return s;
}

double integrate(const Mesh& mesh, const std::function<double(Vec2)>& f) {
  const auto& rule = degree5_rule();
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.bary[q];
      acc += rule.weight[q] * f(l[0] * a + l[1] * b + l[2] * c);
    }
    s += acc * triangle_area(mesh, t);
  }
  return s;
}

std::vector<double> lumped_mass(const Mesh& mesh) {
  std::vector<double> m(mesh.vertices.size(), 0.0);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const double third = triangle_area(mesh, t) / 3.0;
    for (int v : mesh.triangles[t]) m[v] += third;
  }
  return m;
}

std::vector<double> discrete_minus_laplacian(const ScalarField& w) {
  const auto k = assemble_stiffness(w.domain());
  const auto m = lumped_mass(w.domain());
  const Eigen::Map<const Vector> x(w.values.data(), static_cast<Eigen::Index>(w.values.size()));
  const Vector kw = k.full * x;
  std::vector<double> out(w.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = kw[static_cast<Eigen::Index>(i)] / m[i];
  return out;
}

double default_subsolution_tolerance(const ScalarField& w) {
  const double h = w.domain().resolution_h;
  return 10.0 * h * h * std::exp(*std::max_element(w.values.begin(), w.values.end()));
}

SubsolutionReport liouville_residual(const ScalarField& w, double tolerance) {
  SubsolutionReport report;
  report.tolerance = tolerance;
  const auto lap = discrete_minus_laplacian(w);
  const auto on_boundary = boundary_mask(w.domain());
  report.residual.assign(w.values.size(), 0.0);
  report.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    if (on_boundary[i]) continue;
    report.residual[i] = lap[i] - std::exp(w[i]);
    report.max_residual = std::max(report.max_residual, report.residual[i]);
  }
  report.is_subsolution = report.max_residual <= tolerance;
  report.total_mass = total_mass(w);
  return report;
}

ScalarField harmonic_lifting(MeshPtr mesh, std::span<const double> boundary_values) {
  if (boundary_values.size() != mesh->vertices.size())
    throw std::invalid_argument("boundary data needs one entry per vertex");
  const auto k = assemble_stiffness(*mesh);
  std::vector<double> out(mesh->vertices.size(), 0.0);
  for (int v = 0; v < static_cast<int>(out.size()); ++v)
    if (k.unknown_of[v] < 0) out[v] = boundary_values[v];

  const Eigen::Map<const Vector> g(out.data(), static_cast<Eigen::Index>(out.size()));
  const Vector kg = k.full * g;
  Vector rhs(k.interior_nodes.size());
  for (std::size_t i = 0; i < k.interior_nodes.size(); ++i) rhs[i] = -kg[k.interior_nodes[i]];
  if (rhs.size() > 0) {
    Eigen::SimplicialLDLT<SparseMatrix> solver(k.interior);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Laplace factorization failed");
    const Vector x = solver.solve(rhs);
    for (std::size_t i = 0; i < k.interior_nodes.size(); ++i) out[k.interior_nodes[i]] = x[i];
  }
  return {std::move(mesh), std::move(out)};
}

ScalarField solve_poisson_zero_trace(MeshPtr mesh, std::span<const double> rhs) {
  if (rhs.size() != mesh->vertices.size()) throw std::invalid_argument("rhs needs one entry per vertex");
  const auto k = assemble_stiffness(*mesh);
  const auto m = lumped_mass(*mesh);
  std::vector<double> out(mesh->vertices.size(), 0.0);
  Vector b(k.interior_nodes.size());
  for (std::size_t i = 0; i < k.interior_nodes.size(); ++i) {
    const int v = k.interior_nodes[i];
    b[i] = m[v] * rhs[v];
  }
  if (b.size() > 0) {
    Eigen::SimplicialLDLT<SparseMatrix> solver(k.interior);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Poisson factorization failed");
    const Vector x = solver.solve(b);
    for (std::size_t i = 0; i < k.interior_nodes.size(); ++i) out[k.interior_nodes[i]] = x[i];
  }
  return {std::move(mesh), std::move(out)};
}

ScalarField solve_liouville_dirichlet(MeshPtr mesh, std::span<const double> boundary_values,
                                      const NewtonOptions& options) {
  const auto k = assemble_stiffness(*mesh);
  const auto lumped = lumped_mass(*mesh);
  std::vector<double> w = harmonic_lifting(mesh, boundary_values).values;
  const auto& interior = k.interior_nodes;

  auto residual = [&](const std::vector<double>& x) {
    const Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Vector kx = k.full * xv;
    std::vector<double> r(x.size(), 0.0);
    for (int v : interior) r[v] = kx[v] / lumped[v] - std::exp(x[v]);
    return r;
  };

  std::vector<double> r = residual(w);
  double norm_r = max_abs_interior(r, interior);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (norm_r <= options.newton_tol) return {std::move(mesh), std::move(w)};

    SparseMatrix jac = k.interior;
    Vector rhs(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) {
      const int v = interior[i];
      const auto ii = static_cast<Eigen::Index>(i);
      jac.coeffRef(ii, ii) -= lumped[v] * std::exp(w[v]);
      rhs[ii] = -lumped[v] * r[v];
    }
    Eigen::SimplicialLDLT<SparseMatrix> solver(jac);
    if (solver.info() != Eigen::Success) throw NewtonDiverged("Newton Jacobian is singular");
    const Vector step = solver.solve(rhs);
    if (!step.allFinite()) throw NewtonDiverged("Newton step is not finite");

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, scale *= 0.5) {
      std::vector<double> trial = w;
      bool sane = true;
      for (std::size_t i = 0; i < interior.size(); ++i) {
        double& x = trial[interior[i]];
        x += scale * step[static_cast<Eigen::Index>(i)];
        if (!std::isfinite(x) || std::abs(x) > options.blowup) sane = false;
      }
      if (!sane) continue;
      auto trial_r = residual(trial);
      const double trial_norm = max_abs_interior(trial_r, interior);
      if (trial_norm < norm_r) {
        w = std::move(trial);
        r = std::move(trial_r);
        norm_r = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Rounding floor: the step cannot reduce a residual that is already tiny.
      if (norm_r <= 100.0 * options.newton_tol) return {std::move(mesh), std::move(w)};
      std::ostringstream why;
      why << "damped Newton made no progress at iteration " << iter << " (residual " << norm_r << ")";
      throw NewtonDiverged(why.str());
    }
  }
  if (norm_r <= options.newton_tol) return {std::move(mesh), std::move(w)};
  throw NewtonDiverged("Newton iteration cap reached with residual " + std::to_string(norm_r));
}

ScalarField normalize_gauge(const ScalarField& w, double c) {
  auto scaled = std::make_shared<const Mesh>(scale_mesh(w.domain(), std::exp(0.5 * c)));
  std::vector<double> v = w.values;
  for (double& x : v) x -= c;
  return {std::move(scaled), std::move(v)};
}

void write_field(std::ostream& out, const ScalarField& w) {
  std::ostringstream head;
  head << "mesh_checksum " << std::hex << std::setw(16) << std::setfill('0') << mesh_checksum(w.domain());
  out << head.str() << '\n';
  const auto old = out.precision(17);
  for (double x : w.values) out << x << '\n';
  out.precision(old);
}

}  // namespace liouville
