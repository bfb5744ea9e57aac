#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/fields.hpp"
#include "liouville/levelset.hpp"

namespace liouville {

/// Bad configuration text or spec string. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string name;
  std::string domain;
  std::string weight;
  std::string map;
  double h = 0.05;
  int refinements = 0;
  int levels = 40;
  double tol = 0.0;     // 0: scenario default
  double margin = 0.0;  // 0: scenario default
  std::string out;
};

/// Keys accepted in config files.
const std::vector<std::string>& config_keys();

/// Sets one key; throws ConfigError on an unknown key or a bad value.
void apply_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines. Keys before the first `[name]` header are
/// defaults for every section; each section yields one config named after it.
/// '#' and ';' start comments.
std::vector<ScenarioConfig> parse_config(std::istream& in);

/// A domain built from a spec: "disk:R", "annulus:a,b", "polar:r0,r1,...",
/// or "mapped" (image of the unit disk under `map`).
struct Domain {
  MeshPtr mesh;
  std::optional<ConformalMap> map;
  double area = 0.0;  // continuum area
};

Domain build_domain(const std::string& spec, double h, int refinements, const std::string& map_spec = {});

/// "U:lambda", "const:c", "mass:M" (constant with continuum mass M),
/// "pullback:lambda" (mapped domains) or "zero".
ScalarField build_weight(const std::string& spec, const Domain& domain);

/// Omega for the audit: '+'-joined "disk:r" and "annulus:a,b" pieces, each
/// selecting the ambient triangles whose centroid lies inside.
std::vector<bool> build_omega(const std::string& spec, const Mesh& ambient);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Fixed, locale-independent number formatting used by every CSV cell.
std::string fmt(double x);

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  std::string statement;
  Table table;
  std::vector<std::pair<std::string, std::string>> metrics;
  std::vector<Assertion> assertions;

  void metric(const std::string& key, double value) { metrics.emplace_back(key, fmt(value)); }
  void check(const std::string& what, bool ok, const std::string& detail) { assertions.push_back({what, ok, detail}); }
  bool passed() const;
};

/// "# schema=1" header, metadata comments, the table, then metric and
/// assertion comment lines.
void write_csv(std::ostream& out, const ScenarioReport& report);
void write_table(std::ostream& out, const Table& table);

struct ScenarioInfo {
  std::string name;
  std::string statement;
  ScenarioConfig defaults;
  std::function<ScenarioReport(const ScenarioConfig&)> run;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo* find_scenario(const std::string& name);

/// Fills unset fields of `cfg` from the scenario defaults and runs it.
/// Throws ConfigError for an unknown name or invalid settings.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// Subcommand tables.
Table eig_table(const ScenarioConfig& cfg, ScalarField* last_eigenfunction = nullptr);
Table bol_table(const ScenarioConfig& cfg, ScalarField* field_out = nullptr);
Table audit_table(const ScenarioConfig& cfg, const std::string& omega_spec, AuditReport* report = nullptr);
ScenarioReport rearrange_report(const ScenarioConfig& cfg, ScalarField* eigenfunction = nullptr);

}  // namespace liouville
