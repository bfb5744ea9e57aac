#include "liouville/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "liouville/fields.hpp"
#include "liouville/mesh.hpp"

namespace liouville {
namespace {

constexpr double kDiskSlack = 1e-12;

Complex eval_unchecked(const ConformalMap& map, Complex z) {
  const auto& c = map.coefficients;
  switch (map.kind) {
    case MapKind::ScaledRotation:
      return c[0] * z;
    case MapKind::Polynomial: {
      Complex acc{0.0, 0.0};
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * z;
      return acc;
    }
    case MapKind::DiskAutomorphism:
      return c[0] * (z - c[1]) / (1.0 - std::conj(c[1]) * z);
  }
  return {};
}

Complex deriv_unchecked(const ConformalMap& map, Complex z) {
  const auto& c = map.coefficients;
  switch (map.kind) {
    case MapKind::ScaledRotation:
      return c[0];
    case MapKind::Polynomial: {
      Complex acc{0.0, 0.0};
      for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + double(k + 1) * c[k];
      return acc;
    }
    case MapKind::DiskAutomorphism: {
      const Complex d = 1.0 - std::conj(c[1]) * z;
      return c[0] * (1.0 - std::norm(c[1])) / (d * d);
    }
  }
  return {};
}

void check_disk(Complex z) {
  if (std::abs(z) > 1.0 + kDiskSlack) throw std::domain_error("point outside the closed unit disk");
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto orient = [](Complex p, Complex q, Complex r) {
    return (q.real() - p.real()) * (r.imag() - p.imag()) - (q.imag() - p.imag()) * (r.real() - p.real());
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

std::vector<double> split_numbers(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in map spec: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad number in map spec: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

ConformalMap ConformalMap::scaled_rotation(double delta, double theta) {
  if (!(delta > 0.0)) throw std::invalid_argument("scale must be positive");
  return {MapKind::ScaledRotation, {std::polar(delta, theta)}};
}

ConformalMap ConformalMap::polynomial(std::vector<Complex> coefficients) {
  if (coefficients.empty() || coefficients.front() == Complex{})
    throw std::invalid_argument("polynomial map needs a nonzero linear coefficient");
  return {MapKind::Polynomial, std::move(coefficients)};
}

ConformalMap ConformalMap::disk_automorphism(double delta, double theta, Complex a) {
  if (!(delta > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("automorphism center must lie in the open disk");
  return {MapKind::DiskAutomorphism, {std::polar(delta, theta), a}};
}

Complex evaluate(const ConformalMap& map, Complex z) {
  check_disk(z);
  return eval_unchecked(map, z);
}

Complex derivative(const ConformalMap& map, Complex z) {
  check_disk(z);
  return deriv_unchecked(map, z);
}

Complex invert(const ConformalMap& map, Complex x, double tol) {
  const Complex seed = (x - eval_unchecked(map, 0.0)) / deriv_unchecked(map, 0.0);
  return invert(map, x, tol, seed);
}

Complex invert(const ConformalMap& map, Complex x, double tol, Complex seed) {
  const double target = tol * std::max(1.0, std::abs(x));
  Complex z = seed;
  double res = std::abs(eval_unchecked(map, z) - x);
  int outside = 0;
  for (int iter = 0; iter < 100 && res > target; ++iter) {
    const Complex d = deriv_unchecked(map, z);
    if (d == Complex{}) throw NotInImage("vanishing derivative during inversion");
    Complex step = (eval_unchecked(map, z) - x) / d;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
      const Complex trial = z - step;
      const double trial_res = std::abs(eval_unchecked(map, trial) - x);
      if (trial_res < res) {
        z = trial;
        res = trial_res;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    outside = std::abs(z) > 1.0 + 1e-9 ? outside + 1 : 0;
    if (outside > 5) throw NotInImage("Newton iterate keeps leaving the unit disk");
  }
  if (res > std::max(target, 1e-10 * std::max(1.0, std::abs(x))))
    throw NotInImage("Newton inversion did not converge");
  if (std::abs(z) > 1.0 + 1e-9) throw NotInImage("point lies outside the image of the disk");
  if (std::abs(z) > 1.0) z /= std::abs(z);
  return z;
}

UnivalenceReport univalence_check(const ConformalMap& map, int boundary_samples, double tolerance) {
  UnivalenceReport rep;
  const int n = boundary_samples;
  rep.min_abs_derivative = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z = std::polar(i / 20.0, 2.0 * std::numbers::pi * j / n);
      rep.min_abs_derivative = std::min(rep.min_abs_derivative, std::abs(deriv_unchecked(map, z)));
    }

  std::vector<Complex> img(n);
  for (int j = 0; j < n; ++j) img[j] = eval_unchecked(map, std::polar(1.0, 2.0 * std::numbers::pi * j / n));

  rep.min_boundary_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      rep.min_boundary_separation = std::min(rep.min_boundary_separation, std::abs(img[i] - img[j]));

  rep.boundary_simple = true;
  for (int i = 0; i < n && rep.boundary_simple; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(img[i], img[(i + 1) % n], img[j], img[(j + 1) % n])) {
        rep.boundary_simple = false;
        break;
      }
    }

  const Complex center = eval_unchecked(map, 0.0);
  double turning = 0.0;
  for (int j = 0; j < n; ++j) turning += std::arg((img[(j + 1) % n] - center) / (img[j] - center));
  rep.winding_number = static_cast<int>(std::lround(turning / (2.0 * std::numbers::pi)));

  rep.univalent = rep.min_abs_derivative > tolerance && rep.min_boundary_separation > tolerance &&
                  rep.boundary_simple && rep.winding_number == 1;
  return rep;
}

double max_boundary_derivative(const ConformalMap& map, int samples) {
  double m = 0.0;
  for (int j = 0; j < samples; ++j)
    m = std::max(m, std::abs(deriv_unchecked(map, std::polar(1.0, 2.0 * std::numbers::pi * j / samples))));
  return m;
}

ConformalMap parse_map(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "identity" && colon == std::string::npos) return ConformalMap::identity();
  if (colon == std::string::npos) throw std::invalid_argument("map spec needs 'kind:values'");
  const auto v = split_numbers(text.substr(colon + 1));
  if (kind == "poly") {
    std::vector<Complex> c(v.begin(), v.end());
    return ConformalMap::polynomial(std::move(c));
  }
  if (kind == "scale") {
    if (v.size() != 2) throw std::invalid_argument("scale map needs delta,theta");
    return ConformalMap::scaled_rotation(v[0], v[1]);
  }
  if (kind == "mobius") {
    if (v.size() != 4) throw std::invalid_argument("mobius map needs delta,theta,re,im");
    return ConformalMap::disk_automorphism(v[0], v[1], {v[2], v[3]});
  }
  throw std::invalid_argument("unknown map kind '" + kind + "'");
}

std::string describe(const ConformalMap& map) {
  std::ostringstream out;
  out.precision(17);
  const auto& c = map.coefficients;
  switch (map.kind) {
    case MapKind::ScaledRotation:
      out << "scale:" << std::abs(c[0]) << ',' << std::arg(c[0]);
      break;
    case MapKind::Polynomial:
      out << "poly:";
      for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << c[k].real();
      break;
    case MapKind::DiskAutomorphism:
      out << "mobius:" << std::abs(c[0]) << ',' << std::arg(c[0]) << ',' << c[1].real() << ','
          << c[1].imag();
      break;
  }
  return out.str();
}

ScalarField pullback_field(const ConformalMap& map, double lambda, MeshPtr mesh) {
  std::vector<double> w(mesh->vertices.size());
  const bool seeded = static_cast<bool>(mesh->placement) && mesh->reference.size() == w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Complex x = to_complex(mesh->vertices[i]);
    const Complex z = seeded ? invert(map, x, 1e-13, to_complex(mesh->reference[i])) : invert(map, x);
    w[i] = u_lambda(lambda, to_vec2(z)) - 2.0 * std::log(std::abs(deriv_unchecked(map, z)));
  }
  return {std::move(mesh), std::move(w)};
}

ScalarField transported_ground_state(const ConformalMap& map, MeshPtr mesh) {
  std::vector<double> phi(mesh->vertices.size());
  const bool seeded = static_cast<bool>(mesh->placement) && mesh->reference.size() == phi.size();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Complex x = to_complex(mesh->vertices[i]);
    const Complex z = seeded ? invert(map, x, 1e-13, to_complex(mesh->reference[i])) : invert(map, x);
    const double r2 = std::norm(z);
    phi[i] = (1.0 - r2) / (1.0 + r2);
  }
  return {std::move(mesh), std::move(phi)};
}

}  // namespace liouville
