// liouville_lab: scenario driver and per-module CSV emitters.
#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include "liouville/fields.hpp"
#include "liouville/mesh.hpp"
#include "liouville/scenario.hpp"

namespace fs = std::filesystem;
using namespace liouville;

namespace {

struct Common {
  std::string config;
  std::string domain;
  std::string weight;
  std::string map;
  std::optional<double> h;
  std::optional<int> refinements;
  std::optional<int> levels;
  std::optional<double> tol;
  std::optional<double> margin;
  std::string out;
  std::string dump_mesh;
  std::string dump_field;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key = value config file; flags override it");
  app->add_option("--domain", c.domain, "disk:R | annulus:a,b | polar:r0,r1,... | mapped");
  app->add_option("--weight", c.weight, "U:lambda | const:c | mass:M | pullback:lambda | zero");
  app->add_option("--map", c.map, "poly:a1,a2,... | scale:delta,theta | mobius:delta,theta,re,im");
  app->add_option("--h", c.h, "target mesh size");
  app->add_option("--refinements", c.refinements, "uniform refinements");
  app->add_option("--levels", c.levels, "number of level sets");
  app->add_option("--tol", c.tol, "assertion tolerance");
  app->add_option("--margin", c.margin, "assertion margin");
  app->add_option("--out", c.out, "output CSV path or directory");
  app->add_option("--dump-mesh", c.dump_mesh, "write the mesh to this path");
  app->add_option("--dump-field", c.dump_field, "write the computed field to this path");
}

// Config file first (its first section or leading defaults), then flags.
ScenarioConfig resolve(const Common& c, ScenarioConfig cfg) {
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("cannot open config '" + c.config + "'");
    const auto parsed = parse_config(in);
    const ScenarioConfig* pick = nullptr;
    for (const auto& p : parsed)
      if (p.name == cfg.name || (cfg.name.empty() && !pick)) pick = &p;
    if (pick) {
      const std::string name = cfg.name.empty() ? pick->name : cfg.name;
      cfg = *pick;
      cfg.name = name;
    }
  }
  if (!c.domain.empty()) cfg.domain = c.domain;
  if (!c.weight.empty()) cfg.weight = c.weight;
  if (!c.map.empty()) cfg.map = c.map;
  if (c.h) apply_config_value(cfg, "h", fmt(*c.h));
  if (c.refinements) apply_config_value(cfg, "refinements", std::to_string(*c.refinements));
  if (c.levels) apply_config_value(cfg, "levels", std::to_string(*c.levels));
  if (c.tol) apply_config_value(cfg, "tol", fmt(*c.tol));
  if (c.margin) apply_config_value(cfg, "margin", fmt(*c.margin));
  if (!c.out.empty()) cfg.out = c.out;
  return cfg;
}

// Explicit path, else $LIOUVILLE_LAB_OUT/<stem>.csv, else stdout.
std::optional<fs::path> output_path(const ScenarioConfig& cfg, const std::string& stem) {
  fs::path p;
  if (!cfg.out.empty()) {
    p = cfg.out;
    if (fs::is_directory(p) || cfg.out.back() == '/') p /= stem + ".csv";
  } else if (const char* env = std::getenv("LIOUVILLE_LAB_OUT"); env && *env) {
    p = fs::path(env) / (stem + ".csv");
  } else {
    return std::nullopt;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

template <class Writer>
void emit(const ScenarioConfig& cfg, const std::string& stem, Writer&& write) {
  if (const auto p = output_path(cfg, stem)) {
    std::ofstream out(*p);
    if (!out) throw ConfigError("cannot write '" + p->string() + "'");
    write(out);
    std::cerr << "wrote " << p->string() << '\n';
  } else {
    write(std::cout);
  }
}

void dumps(const Common& c, const ScenarioConfig& cfg, const ScalarField* field) {
  if (!c.dump_mesh.empty()) {
    const Domain dom = build_domain(cfg.domain, cfg.h, cfg.refinements, cfg.map);
    std::ofstream out(c.dump_mesh);
    write_mesh(out, *dom.mesh);
  }
  if (!c.dump_field.empty() && field) {
    std::ofstream out(c.dump_field);
    write_field(out, *field);
  }
}

ScenarioConfig base_config(const std::string& domain, const std::string& weight) {
  ScenarioConfig cfg;
  cfg.domain = domain;
  cfg.weight = weight;
  return cfg;
}

int report_exit(const ScenarioReport& rep) {
  for (const auto& a : rep.assertions)
    if (!a.passed) std::cerr << "FAILED " << rep.scenario << ": " << a.name << " (" << a.detail << ")\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liouville subsolution eigenvalue lab"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  Common eig_opts, bol_opts, audit_opts, rearr_opts, run_opts;
  std::string omega = "annulus:1.2,1.8";
  std::string scenario_name;

  auto* eig = app.add_subcommand("eig", "first eigenvalue of -lap phi = nu e^w phi; CSV h,nu_hat,residual_norm");
  add_common(eig, eig_opts);
  auto* bol = app.add_subcommand("bol", "level-set Bol profile of w - h; CSV t,m,mu,ell,defect,components,holes");
  add_common(bol, bol_opts);
  auto* audit = app.add_subcommand("audit", "strict Bol chain on a multiply connected omega; CSV name,lhs,rhs,margin,ok");
  add_common(audit, audit_opts);
  audit->add_option("--omega", omega, "'+'-joined disk:r / annulus:a,b pieces");
  auto* rearr = app.add_subcommand("rearrange", "radial rearrangement of the first eigenfunction; CSV t,m,R,phi_star");
  add_common(rearr, rearr_opts);

  auto* scenario = app.add_subcommand("scenario", "named experiments");
  scenario->require_subcommand(1);
  auto* run = scenario->add_subcommand("run", "run one scenario; exit 1 if an assertion fails");
  run->add_option("name", scenario_name, "scenario name")->required();
  add_common(run, run_opts);
  auto* list = scenario->add_subcommand("list", "list scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eig) {
      const auto cfg = resolve(eig_opts, base_config("disk:" + fmt(std::sqrt(8.0)), "U:1"));
      ScalarField phi;
      const Table t = eig_table(cfg, &phi);
      emit(cfg, "eig", [&](std::ostream& o) {
        o << "# schema=1\n";
        write_table(o, t);
      });
      dumps(eig_opts, cfg, &phi);
    } else if (*bol) {
      const auto cfg = resolve(bol_opts, base_config("disk:" + fmt(std::sqrt(8.0)), "U:1"));
      ScalarField u;
      const Table t = bol_table(cfg, &u);
      emit(cfg, "bol", [&](std::ostream& o) {
        o << "# schema=1\n";
        write_table(o, t);
      });
      dumps(bol_opts, cfg, &u);
    } else if (*audit) {
      const auto cfg = resolve(audit_opts, base_config("polar:1,1.2,1.8,2", "zero"));
      ScenarioReport rep;
      rep.scenario = "audit";
      AuditReport a;
      rep.table = audit_table(cfg, omega, &a);
      rep.metrics.emplace_back("branch", to_string(a.branch));
      rep.metric("final_defect", a.final_defect);
      rep.check("every_chain_row_holds", a.all_ok, std::to_string(a.rows.size()) + " rows");
      emit(cfg, "audit", [&](std::ostream& o) { write_csv(o, rep); });
      if (!audit_opts.dump_field.empty()) {
        const ScalarField w = build_weight(cfg.weight, build_domain(cfg.domain, cfg.h, cfg.refinements, cfg.map));
        dumps(audit_opts, cfg, &w);
      } else {
        dumps(audit_opts, cfg, nullptr);
      }
      return report_exit(rep);
    } else if (*rearr) {
      auto cfg = resolve(rearr_opts, base_config("disk:1", "mass:" + fmt(4.0 * std::numbers::pi)));
      if (!rearr_opts.levels) cfg.levels = 200;
      ScalarField phi;
      ScenarioReport rep = rearrange_report(cfg, &phi);
      rep.scenario = "rearrange";
      emit(cfg, "rearrange", [&](std::ostream& o) { write_csv(o, rep); });
      dumps(rearr_opts, cfg, &phi);
      return report_exit(rep);
    } else if (*list) {
      for (const auto& s : scenario_registry()) std::cout << s.name << '\t' << s.statement << '\n';
    } else if (*run) {
      const ScenarioInfo* info = find_scenario(scenario_name);
      if (!info) throw ConfigError("unknown scenario '" + scenario_name + "'");
      const ScenarioConfig cfg = resolve(run_opts, info->defaults);
      const ScenarioReport rep = run_scenario(cfg);
      emit(cfg, cfg.name, [&](std::ostream& o) { write_csv(o, rep); });
      dumps(run_opts, cfg, nullptr);
      return report_exit(rep);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
