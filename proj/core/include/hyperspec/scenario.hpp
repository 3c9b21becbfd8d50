#pragma once

// Configuration-driven pipeline: mesh -> assemble -> eliminate -> solve per
// refinement level, then inequality checks, functional checks, oracle
// comparisons, and the Weyl trend, all folded into one deterministic report.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperspec/eigensolve.hpp"
#include "hyperspec/geometry.hpp"
#include "hyperspec/inequalities.hpp"

namespace hyperspec {

// Desk-scale guard: each refinement quadruples the triangle count.
inline constexpr int kMaxRefinements = 8;

struct ScenarioOutputs {
  std::string json_path = "report.json";
  std::string csv_path = "report.csv";
  std::string mesh_prefix;  // empty: no mesh files
};

struct ScenarioConfig {
  Domain domain;
  double target_h = 0.25;
  int refinements = 0;
  int k_max = 1;
  std::vector<InequalityFamily> kinds;
  std::vector<TestFunctionSpec> functional;
  double functional_tol = kFunctionalTolDefault;
  double eig_residual_tol = kResidualRelTol;
  std::optional<double> eps_cone_override;
  ScenarioOutputs output;
  nlohmann::ordered_json echo;  // resolved configuration, defaults included

  explicit ScenarioConfig(Domain d) : domain(std::move(d)) {}
};

// Parses and validates a configuration document; throws std::invalid_argument
// with a readable message on any problem.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

// Sets doc[dotted path] = parsed value: valid JSON literals are taken as-is,
// comma-separated values become string arrays, anything else is a string.
void apply_dotted_override(nlohmann::ordered_json& doc, const std::string& dotted,
                           const std::string& value);

struct FunctionalEntry {
  std::string name;
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int dof = 0;
  Spectrum spectrum;
  std::vector<InequalityReport> inequalities;
  std::vector<FunctionalEntry> functional;
  nlohmann::ordered_json oracle;  // reference comparisons and Weyl ratios
};

struct ScenarioResult {
  nlohmann::ordered_json config_echo;
  std::optional<GeometricProfile> profile;
  std::vector<LevelResult> levels;
  bool hard_pass = true;
  std::vector<std::string> failures;  // one line per failed hard check

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

// Runs the whole ladder. Throws NumericalError when the solve degrades
// (residuals, Rayleigh-Ritz monotonicity, insufficient resolution for k_max).
// Inequality or functional violations are not exceptions; they land in
// `failures` and clear `hard_pass`.  Conjecture and inadmissible outcomes
// never affect `hard_pass`.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Writes the JSON and CSV reports (and per-level meshes when requested).
// Throws std::runtime_error when a path cannot be written.
void emit_report(const ScenarioResult& result, const ScenarioOutputs& output);

// Self-contained deterministic check suite over the oracles, the conformal
// calculus, exact-spectrum inequalities, and two small solves.  Produces the
// same bytes on every run of the same build.
struct ValidationResult {
  nlohmann::ordered_json report;
  bool pass = false;
};
ValidationResult run_validation();

}  // namespace hyperspec
