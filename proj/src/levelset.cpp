#include "liouville/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "liouville/spectral.hpp"

namespace liouville {
namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

using Key = std::uint64_t;

Key vertex_key(int v) { return static_cast<Key>(v) << 1; }
Key crossing_key(int a, int b) {
  const auto lo = static_cast<Key>(std::min(a, b)), hi = static_cast<Key>(std::max(a, b));
  return (((lo << 31) ^ hi) << 1) | 1u;
}
Key directed(int a, int b) { return (static_cast<Key>(a) << 32) | static_cast<Key>(b); }

// A point on the clipped polygon: position plus the interpolated fields.
struct Node {
  Vec2 p;
  double w = 0.0;
  double base = 0.0;
  Key key = 0;
};

struct Segment {
  Node a, b;
  bool on_contour = false;
};

double exp_integral_over(const Node& a, const Node& b, const Node& c, bool use_base) {
  const auto& rule = degree5_rule();
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.weight.size(); ++q) {
    const auto& l = rule.bary[q];
    const double v = use_base ? l[0] * a.base + l[1] * b.base + l[2] * c.base
                              : l[0] * a.w + l[1] * b.w + l[2] * c.w;
    acc += rule.weight[q] * std::exp(v);
  }
  return acc * 0.5 * std::abs(orient2d(a.p, b.p, c.p));
}

double half_exp_along(const Node& a, const Node& b) {
  double acc = 0.0;
  for (double g : gauss2_nodes) acc += 0.5 * std::exp(0.5 * ((1.0 - g) * a.w + g * b.w));
  return acc * norm(b.p - a.p);
}

double exp_over_gradient_along(const Node& a, const Node& b, double grad) {
  double acc = 0.0;
  for (double g : gauss2_nodes) acc += 0.5 * std::exp((1.0 - g) * a.w + g * b.w);
  return acc * norm(b.p - a.p) / grad;
}

std::vector<ContourLoop> chain_loops(const std::vector<Segment>& segs) {
  std::unordered_map<Key, int> starting;
  starting.reserve(segs.size() * 2);
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    if (!starting.emplace(segs[i].a.key, i).second)
      throw std::logic_error("contour vertex starts two segments");
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<ContourLoop> loops;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    ContourLoop loop;
    int cur = static_cast<int>(s);
    while (!used[cur]) {
      used[cur] = true;
      loop.points.push_back(segs[cur].a.p);
      const auto next = starting.find(segs[cur].b.key);
      if (next == starting.end()) throw std::logic_error("contour does not close");
      cur = next->second;
    }
    if (cur != static_cast<int>(s)) throw std::logic_error("contour loops merge");
    loop.signed_area = polygon_signed_area(loop.points);
    loops.push_back(std::move(loop));
  }
  for (auto& hole : loops) {
    if (hole.signed_area >= 0.0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(loops.size()); ++j) {
      const auto& outer = loops[j];
      if (outer.signed_area <= 0.0 || outer.signed_area >= best) continue;
      if (point_in_polygon(hole.points.front(), outer.points)) {
        best = outer.signed_area;
        hole.parent = j;
      }
    }
  }
  return loops;
}

std::unordered_set<Key> boundary_edges(const Mesh& mesh) {
  std::unordered_set<Key> edges;
  for (const auto& loop : mesh.boundary_loops)
    for (std::size_t i = 0; i < loop.size(); ++i) edges.insert(directed(loop[i], loop[(i + 1) % loop.size()]));
  return edges;
}

void check_same_mesh(const ScalarField& a, const ScalarField& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("fields live on different meshes");
}

double region_mass(const ScalarField& w, const std::vector<int>& triangles) {
  const Mesh& mesh = w.domain();
  double s = 0.0;
  for (int t : triangles) {
    const auto& tri = mesh.triangles[t];
    Node a{mesh.vertices[tri[0]], w[tri[0]]}, b{mesh.vertices[tri[1]], w[tri[1]]},
        c{mesh.vertices[tri[2]], w[tri[2]]};
    s += exp_integral_over(a, b, c, false);
  }
  return s;
}

double loop_weight(const Mesh& mesh, const std::vector<int>& loop, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const int a = loop[i], b = loop[(i + 1) % loop.size()];
    s += half_exp_along({mesh.vertices[a], w[a]}, {mesh.vertices[b], w[b]});
  }
  return s;
}

Vec2 centroid(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  return (1.0 / 3.0) * (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]);
}

std::vector<int> triangle_components(const Mesh& mesh, const std::vector<int>& tris) {
  std::vector<int> parent(tris.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<Key, int> owner;
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    const auto& t = mesh.triangles[tris[i]];
    for (int e = 0; e < 3; ++e) {
      const Key k = crossing_key(t[e], t[(e + 1) % 3]);
      auto [it, inserted] = owner.emplace(k, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  std::vector<int> label(tris.size());
  std::unordered_map<int, int> compact;
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    const int root = find(i);
    auto [it, inserted] = compact.emplace(root, static_cast<int>(compact.size()));
    label[i] = it->second;
  }
  return label;
}

ChainRow make_row(std::string name, double lhs, double rhs, bool strict, const AuditOptions& opt) {
  ChainRow row{std::move(name), lhs, rhs, lhs - rhs, strict, false};
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  row.ok = strict ? row.margin > 0.0 : row.margin >= -opt.relative_slack * scale;
  return row;
}

double bol_rhs(double m) { return m * (kEightPi - m); }

}  // namespace

double perturb_level(const ScalarField& field, double t) {
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  const double range = *hi - *lo > 0.0 ? *hi - *lo : 1.0;
  const double step = 1e-8 * range;
  std::vector<double> sorted = field.values;
  std::sort(sorted.begin(), sorted.end());
  while (std::binary_search(sorted.begin(), sorted.end(), t)) {
    const double next = t + step;
    t = next > t ? next : std::nextafter(t, std::numeric_limits<double>::infinity());
  }
  return t;
}

LevelSet level_set(const ScalarField& field, const ScalarField& w, double t, const ScalarField* base) {
  check_same_mesh(field, w);
  if (base) check_same_mesh(field, *base);
  const Mesh& mesh = field.domain();
  const auto on_boundary = boundary_edges(mesh);

  LevelSet out;
  out.t = perturb_level(field, t);
  const double level = out.t;

  auto node_at = [&](int v) {
    return Node{mesh.vertices[v], w[v], base ? (*base)[v] : 0.0, vertex_key(v)};
  };
  auto crossing = [&](int a, int b) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    const double s = (level - field[lo]) / (field[hi] - field[lo]);
    Node n;
    n.p = lerp(mesh.vertices[lo], mesh.vertices[hi], s);
    n.w = (1.0 - s) * w[lo] + s * w[hi];
    n.base = base ? (1.0 - s) * (*base)[lo] + s * (*base)[hi] : 0.0;
    n.key = crossing_key(a, b);
    return n;
  };

  std::vector<Segment> segs;
  for (const auto& tri : mesh.triangles) {
    const std::array<bool, 3> above{field[tri[0]] > level, field[tri[1]] > level, field[tri[2]] > level};
    const int count = above[0] + above[1] + above[2];
    if (count == 0) continue;

    std::vector<Node> poly;
    int exit_at = -1;
    for (int e = 0; e < 3; ++e) {
      const int p = tri[e], q = tri[(e + 1) % 3];
      if (above[e]) poly.push_back(node_at(p));
      if (above[e] != above[(e + 1) % 3]) {
        if (above[e]) exit_at = static_cast<int>(poly.size());
        poly.push_back(crossing(p, q));
      }

      if (on_boundary.count(directed(p, q))) {
        if (above[e] && above[(e + 1) % 3])
          segs.push_back({node_at(p), node_at(q), false});
        else if (above[e])
          segs.push_back({node_at(p), crossing(p, q), false});
        else if (above[(e + 1) % 3])
          segs.push_back({crossing(p, q), node_at(q), false});
      }
    }

    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      out.mass += exp_integral_over(poly[0], poly[k], poly[k + 1], false);
      if (base) out.base_mass += exp_integral_over(poly[0], poly[k], poly[k + 1], true);
      out.area += 0.5 * orient2d(poly[0].p, poly[k].p, poly[k + 1].p);
    }

    if (count < 3) {
      const Node& a = poly[exit_at];
      const Node& b = poly[(exit_at + 1) % poly.size()];
      const Vec2 p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
      const double twice = orient2d(p0, p1, p2);
      const Vec2 grad = (1.0 / twice) * Vec2{field[tri[0]] * (p1.y - p2.y) + field[tri[1]] * (p2.y - p0.y) +
                                                 field[tri[2]] * (p0.y - p1.y),
                                             field[tri[0]] * (p2.x - p1.x) + field[tri[1]] * (p0.x - p2.x) +
                                                 field[tri[2]] * (p1.x - p0.x)};
      const double g = norm(grad);
      out.flux += g * norm(b.p - a.p);
      out.coarea_weight += exp_over_gradient_along(a, b, g);
      segs.push_back({a, b, true});
    }
  }

  for (const auto& s : segs) {
    out.ell += half_exp_along(s.a, s.b);
    out.length += norm(s.b.p - s.a.p);
  }
  out.loops = chain_loops(segs);
  for (const auto& loop : out.loops) (loop.signed_area > 0.0 ? out.components : out.holes) += 1;
  return out;
}

LevelSetProfile level_profile(const ScalarField& field, const ScalarField& w, std::span<const double> levels,
                              const ScalarField* base) {
  LevelSetProfile prof;
  prof.t_max = *std::max_element(field.values.begin(), field.values.end());
  prof.has_base = base != nullptr;
  for (double t : levels) {
    const LevelSet ls = level_set(field, w, t, base);
    prof.levels.push_back(ls.t);
    prof.mass.push_back(ls.mass);
    prof.base_mass.push_back(ls.base_mass);
    prof.ell.push_back(ls.ell);
    prof.flux.push_back(ls.flux);
    prof.coarea_weight.push_back(ls.coarea_weight);
    prof.components.push_back(ls.components);
    prof.holes.push_back(ls.holes);
  }
  return prof;
}

LevelSetProfile level_profile(const ScalarField& field, const ScalarField& w, int n_levels,
                              const ScalarField* base) {
  if (n_levels < 2) throw std::invalid_argument("need at least two levels");
  const double t_max = *std::max_element(field.values.begin(), field.values.end());
  std::vector<double> levels(n_levels);
  for (int k = 0; k < n_levels; ++k) levels[k] = t_max * k / (n_levels - 1);
  return level_profile(field, w, levels, base);
}

double bol_defect(double ell, double mass) {
  if (!(mass >= 0.0) || mass > kEightPi * (1.0 + 1e-12))
    throw std::invalid_argument("mass must lie in [0, 8 pi]");
  return ell * ell - 0.5 * mass * (kEightPi - mass);
}

double huber_defect(const ScalarField& h) {
  const double ell = boundary_weight(h);
  return ell * ell - 4.0 * std::numbers::pi * total_mass(h);
}

bool discretely_subharmonic(const ScalarField& h) {
  const auto lap = discrete_minus_laplacian(h);
  const auto on_boundary = boundary_mask(h.domain());
  const double hh = h.domain().resolution_h;
  for (std::size_t i = 0; i < lap.size(); ++i)
    if (!on_boundary[i] && -lap[i] < -10.0 * hh * hh) return false;
  return true;
}

double isoperimetric_defect(const Mesh& region) {
  const double p = boundary_length(region);
  return p * p - 4.0 * std::numbers::pi * mesh_area(region);
}

Decomposition decompose(const ScalarField& w) {
  const auto lap = discrete_minus_laplacian(w);
  const auto on_boundary = boundary_mask(w.domain());
  std::vector<double> f(w.values.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!on_boundary[i]) f[i] = lap[i] - std::exp(w[i]);

  Decomposition d;
  d.f = ScalarField(w.mesh, f);
  d.h0 = harmonic_lifting(w.mesh, w.values);
  d.h_minus = solve_poisson_zero_trace(w.mesh, f);
  std::vector<double> h(f.size()), u(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    h[i] = d.h0[i] + d.h_minus[i];
    u[i] = on_boundary[i] ? 0.0 : w[i] - h[i];
  }
  d.h = ScalarField(w.mesh, std::move(h));
  d.u = ScalarField(w.mesh, std::move(u));
  return d;
}

ScalarField restrict_field(const ScalarField& w, const SubMesh& sub, MeshPtr sub_mesh) {
  std::vector<double> v;
  v.reserve(sub.parent_vertex.size());
  for (int p : sub.parent_vertex) v.push_back(w[p]);
  return {std::move(sub_mesh), std::move(v)};
}

ScalarField extend_hat(const ScalarField& w, MeshPtr ambient) {
  const Mesh& inner = w.domain();
  const auto on_boundary = boundary_mask(inner);
  for (std::size_t i = 0; i < w.values.size(); ++i)
    if (on_boundary[i] && std::abs(w[i]) > 1e-9)
      throw std::invalid_argument("w must vanish on the boundary (normalize the gauge first)");

  // Bucket ambient vertices on a grid of the inner mesh resolution.
  const double cell = std::max(inner.resolution_h, 1e-12);
  auto cell_of = [cell](Vec2 p) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x / cell));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y / cell));
    return std::pair{ix, iy};
  };
  auto hash = [](std::int64_t ix, std::int64_t iy) {
    return static_cast<Key>(ix) * 0x9E3779B97F4A7C15ull ^ static_cast<Key>(iy);
  };
  std::unordered_multimap<Key, int> grid;
  grid.reserve(ambient->vertices.size());
  for (int v = 0; v < static_cast<int>(ambient->vertices.size()); ++v) {
    const auto [ix, iy] = cell_of(ambient->vertices[v]);
    grid.emplace(hash(ix, iy), v);
  }

  std::vector<double> out(ambient->vertices.size(), 0.0);
  for (std::size_t i = 0; i < inner.vertices.size(); ++i) {
    const Vec2 p = inner.vertices[i];
    const double tol = 1e-9 * (1.0 + norm(p));
    const auto [ix, iy] = cell_of(p);
    int match = -1;
    for (std::int64_t dx = -1; dx <= 1 && match < 0; ++dx)
      for (std::int64_t dy = -1; dy <= 1 && match < 0; ++dy) {
        auto [lo, hi] = grid.equal_range(hash(ix + dx, iy + dy));
        for (auto it = lo; it != hi; ++it)
          if (norm(ambient->vertices[it->second] - p) <= tol) {
            match = it->second;
            break;
          }
      }
    if (match < 0) throw std::invalid_argument("vertex of w's mesh has no counterpart in the ambient mesh");
    out[match] = w[i];
  }
  return {std::move(ambient), std::move(out)};
}

WeakSubsolutionReport weak_subsolution_check(const ScalarField& w, double tolerance) {
  const auto k = assemble_stiffness(w.domain());
  const auto m = assemble_weighted_mass(w);
  const auto lumped = lumped_mass(w.domain());
  const Eigen::Map<const Eigen::VectorXd> x(w.values.data(), static_cast<Eigen::Index>(w.values.size()));
  const Eigen::VectorXd kx = k.full * x;
  const Eigen::VectorXd load = m.full * Eigen::VectorXd::Ones(x.size());

  WeakSubsolutionReport rep;
  rep.tolerance = tolerance;
  rep.defect.assign(w.values.size(), 0.0);
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (int v : k.interior_nodes) {
    rep.defect[v] = (kx[v] - load[v]) / lumped[v];
    if (rep.defect[v] > rep.max_defect) {
      rep.max_defect = rep.defect[v];
      rep.worst_vertex = v;
    }
  }
  rep.passed = rep.max_defect <= tolerance;
  return rep;
}

std::string to_string(AuditBranch branch) {
  switch (branch) {
    case AuditBranch::LargeHoleMass: return "large_hole_mass";
    case AuditBranch::LargeUnionMass: return "large_union_mass";
    case AuditBranch::SmallUnionMass: return "small_union_mass";
    case AuditBranch::EnclosedHoles: return "enclosed_holes";
    case AuditBranch::Disconnected: return "disconnected";
  }
  return "unknown";
}

AuditReport appendix_audit(const ScalarField& w, const std::vector<bool>& omega, const AuditOptions& opt) {
  const Mesh& ambient = w.domain();
  if (omega.size() != ambient.triangles.size()) throw std::invalid_argument("omega mask needs one entry per triangle");

  std::vector<int> omega_tris;
  for (int t = 0; t < static_cast<int>(omega.size()); ++t)
    if (omega[t]) omega_tris.push_back(t);
  if (omega_tris.empty()) throw std::invalid_argument("omega is empty");

  const SubMesh sub = submesh(ambient, [&](int t) { return omega[t]; });
  const Mesh& om = sub.mesh;
  std::vector<double> w_om;
  for (int p : sub.parent_vertex) w_om.push_back(w[p]);

  const auto ambient_boundary = boundary_mask(ambient);
  for (const auto& loop : om.boundary_loops)
    for (int v : loop)
      if (ambient_boundary[sub.parent_vertex[v]])
        throw std::invalid_argument("omega must stay away from the ambient boundary");

  const auto labels = triangle_components(ambient, omega_tris);
  const int n_components = *std::max_element(labels.begin(), labels.end()) + 1;
  std::size_t n_holes = 0;
  for (int l = 0; l < static_cast<int>(om.boundary_loops.size()); ++l) n_holes += is_hole_loop(om, l);
  if (n_components == 1 && n_holes == 0)
    throw std::invalid_argument("omega is simply connected; use bol_defect directly");

  AuditReport rep;
  AppendixSplit& s = rep.split;
  s.m_ambient = total_mass(w);
  s.min_weight = *std::min_element(w.values.begin(), w.values.end());
  s.m_omega = region_mass(w, omega_tris);

  std::vector<std::vector<Vec2>> hole_polys;
  for (int l = 0; l < static_cast<int>(om.boundary_loops.size()); ++l) {
    const double ell = loop_weight(om, om.boundary_loops[l], w_om);
    if (is_hole_loop(om, l)) {
      s.boundary_0.push_back(l);
      s.ell_0 += ell;
      const auto pts = loop_points(om, l);
      s.length_0 += polygon_perimeter(pts);
      hole_polys.push_back(pts);
    } else {
      s.boundary_1.push_back(l);
      s.ell_1 += ell;
    }
  }
  auto inside_holes = [&](Vec2 p) {
    for (std::size_t j = 0; j < hole_polys.size(); ++j)
      if (point_in_polygon(p, hole_polys[j])) return static_cast<int>(j);
    return -1;
  };

  std::vector<std::vector<int>> star_by_hole(hole_polys.size());
  for (int t = 0; t < static_cast<int>(ambient.triangles.size()); ++t) {
    if (omega[t]) continue;
    const int j = inside_holes(centroid(ambient, t));
    if (j < 0) continue;
    s.omega_star.push_back(t);
    star_by_hole[j].push_back(t);
    s.area_filled_holes += triangle_area(ambient, t);
  }
  s.m_omega_star = region_mass(w, s.omega_star);

  for (int l = 0; l < static_cast<int>(ambient.boundary_loops.size()); ++l) {
    if (!is_hole_loop(ambient, l)) continue;
    if (inside_holes(ambient.vertices[ambient.boundary_loops[l].front()]) < 0) continue;
    s.omega_zero.push_back(l);
    s.m_hat_omega_zero += -loop_signed_area(ambient, l);
  }
  s.area_filled_holes += s.m_hat_omega_zero;
  s.m_hat_filled_holes = s.m_omega_star + s.m_hat_omega_zero;
  s.m_hat_filled_omega = s.m_omega + s.m_hat_filled_holes;

  const double m = s.m_omega;
  const double ell = s.ell_0 + s.ell_1;
  auto add = [&](std::string name, double lhs, double rhs, bool strict) {
    rep.rows.push_back(make_row(std::move(name), lhs, rhs, strict, opt));
  };
  add("ambient_mass_budget", kEightPi, s.m_ambient, false);

  if (n_components > 1) {
    rep.branch = AuditBranch::Disconnected;
    std::vector<double> comp_mass(n_components, 0.0), comp_ell(n_components, 0.0);
    std::vector<std::vector<int>> comp_tris(n_components);
    for (std::size_t i = 0; i < omega_tris.size(); ++i) comp_tris[labels[i]].push_back(omega_tris[i]);
    for (int c = 0; c < n_components; ++c) {
      const SubMesh part = submesh(ambient, [&, c](int t) {
        return omega[t] && std::binary_search(comp_tris[c].begin(), comp_tris[c].end(), t);
      });
      std::vector<double> wp;
      for (int p : part.parent_vertex) wp.push_back(w[p]);
      for (const auto& loop : part.mesh.boundary_loops) comp_ell[c] += loop_weight(part.mesh, loop, wp);
      comp_mass[c] = region_mass(w, comp_tris[c]);
    }
    double sum_sq = 0.0, sum_bounds = 0.0;
    for (int c = 0; c < n_components; ++c) {
      sum_sq += comp_ell[c] * comp_ell[c];
      sum_bounds += bol_rhs(comp_mass[c]);
    }
    add("split_boundary", 2.0 * ell * ell, 2.0 * sum_sq, true);
    for (int c = 0; c < n_components; ++c)
      add("component_" + std::to_string(c) + "_bol", 2.0 * comp_ell[c] * comp_ell[c], bol_rhs(comp_mass[c]), false);
    add("sum_of_component_bounds", sum_bounds, bol_rhs(m), false);
  } else if (s.omega_zero.empty()) {
    rep.branch = AuditBranch::EnclosedHoles;
    const double m_union = m + s.m_omega_star;
    double sum_sq = 0.0, sum_bounds = 0.0;
    std::vector<double> hole_mass(hole_polys.size()), hole_ell(hole_polys.size());
    for (std::size_t j = 0; j < hole_polys.size(); ++j) {
      hole_mass[j] = region_mass(w, star_by_hole[j]);
      hole_ell[j] = loop_weight(om, om.boundary_loops[s.boundary_0[j]], w_om);
      sum_sq += hole_ell[j] * hole_ell[j];
      sum_bounds += bol_rhs(hole_mass[j]);
    }
    add("split_boundary", 2.0 * ell * ell, 2.0 * (s.ell_1 * s.ell_1 + sum_sq), true);
    add("filled_bol", 2.0 * s.ell_1 * s.ell_1, bol_rhs(m_union), false);
    for (std::size_t j = 0; j < hole_polys.size(); ++j)
      add("hole_" + std::to_string(j) + "_bol", 2.0 * hole_ell[j] * hole_ell[j], bol_rhs(hole_mass[j]), false);
    add("expansion", bol_rhs(m_union) + sum_bounds, bol_rhs(m), false);
  } else if (s.m_hat_filled_holes >= kEightPi) {
    rep.branch = AuditBranch::LargeHoleMass;
    const double m_star = s.m_omega_star;
    add("weight_nonnegative", s.min_weight, 0.0, false);
    add("inner_weight_vs_length", 2.0 * s.ell_0 * s.ell_0, 2.0 * s.length_0 * s.length_0, false);
    add("inner_isoperimetric", 2.0 * s.length_0 * s.length_0, kEightPi * s.area_filled_holes, false);
    add("inner_area_vs_hole_mass", kEightPi * s.area_filled_holes, kEightPi * s.m_hat_omega_zero, true);
    add("inner_lower_bound", 2.0 * s.ell_0 * s.ell_0, kEightPi * (kEightPi - m_star), true);
    add("outer_lower_bound", 2.0 * s.ell_1 * s.ell_1, kEightPi * (kEightPi - m - m_star), true);
    add("split_boundary", 2.0 * ell * ell, 2.0 * (s.ell_0 * s.ell_0 + s.ell_1 * s.ell_1), true);
    add("sum_of_bounds", 2.0 * (s.ell_0 * s.ell_0 + s.ell_1 * s.ell_1), bol_rhs(m_star) + bol_rhs(m + m_star), true);
    add("omega_mass_budget", s.m_ambient, m + m_star, false);
  } else if (s.m_hat_filled_omega >= kEightPi) {
    rep.branch = AuditBranch::LargeUnionMass;
    const double m_star = s.m_omega_star, m0 = s.m_hat_omega_zero, m2 = s.m_hat_filled_holes;
    const double root = std::sqrt(4.0 * std::numbers::pi * m0);
    add("weight_nonnegative", s.min_weight, 0.0, false);
    add("inner_bol", 2.0 * s.ell_0 * s.ell_0, bol_rhs(m2), false);
    add("inner_hole_bound", s.ell_0, root, false);
    add("outer_hole_bound", s.ell_1, root, false);
    add("outer_lower_bound", 2.0 * s.ell_1 * s.ell_1, kEightPi * (kEightPi - m - m_star), true);
    add("expanded_square", 2.0 * ell * ell,
        kEightPi * (kEightPi - m - m_star) + bol_rhs(m2) + 2.0 * kEightPi * m0, false);
    add("star_mass_budget", kEightPi - m, m_star, false);
    add("filled_holes_below_threshold", 2.0 * kEightPi, 2.0 * m_star + 2.0 * m0, true);
  } else {
    rep.branch = AuditBranch::SmallUnionMass;
    const double m1 = s.m_hat_filled_omega, m2 = s.m_hat_filled_holes;
    add("filled_omega_below_threshold", kEightPi, m1, true);
    add("split_boundary", 2.0 * ell * ell, 2.0 * (s.ell_1 * s.ell_1 + s.ell_0 * s.ell_0), true);
    add("outer_bol", 2.0 * s.ell_1 * s.ell_1, bol_rhs(m1), false);
    add("inner_bol", 2.0 * s.ell_0 * s.ell_0, bol_rhs(m2), false);
    add("expansion", bol_rhs(m1) + bol_rhs(m2), bol_rhs(m), false);
  }
  add("final_bol", 2.0 * ell * ell, bol_rhs(m), true);

  rep.final_defect = bol_defect(ell, m);
  rep.all_ok = std::all_of(rep.rows.begin(), rep.rows.end(), [](const ChainRow& r) { return r.ok; });
  return rep;
}

}  // namespace liouville
