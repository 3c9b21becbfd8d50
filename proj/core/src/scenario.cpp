#include "hyperspec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "hyperspec/conformal.hpp"
#include "hyperspec/errors.hpp"
#include "hyperspec/fem.hpp"
#include "hyperspec/jsonio.hpp"
#include "hyperspec/mesh.hpp"
#include "hyperspec/oracles.hpp"

namespace hyperspec {

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("configuration: " + message);
}

double require_positive_number(const nlohmann::json& j, const std::string& field,
                               double fallback) {
  if (!j.contains(field)) return fallback;
  const auto& v = j.at(field);
  if (!v.is_number()) config_error(field + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0)) config_error(field + " must be positive");
  return x;
}

int require_int(const nlohmann::json& j, const std::string& field, int fallback,
                int lo, int hi) {
  if (!j.contains(field)) return fallback;
  const auto& v = j.at(field);
  if (!v.is_number_integer()) config_error(field + " must be an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    config_error(field + " must lie in [" + std::to_string(lo) + ", " +
                 std::to_string(hi) + "]");
  return static_cast<int>(x);
}

// Accepts either a JSON array of strings or a single comma-separated string,
// so the same field works from a file and from a command-line override.
std::vector<std::string> string_list(const nlohmann::json& v, const std::string& field) {
  std::vector<std::string> out;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
    return out;
  }
  if (!v.is_array()) config_error(field + " must be an array of strings");
  for (const auto& item : v) {
    if (!item.is_string()) config_error(field + " entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : j.items())
    if (known.find(item.key()) == known.end())
      config_error("unknown field \"" + item.key() + "\" in " + where);
}

std::string display_name(const TestFunctionSpec& f) {
  std::string out = family_name(f.family);
  if (f.family != TestFamily::LogHeight) out += ":" + std::to_string(f.p);
  return out;
}

double euclidean_area(const Domain& d) {
  return std::visit(
      [](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, EuclideanBox>) {
          return (shape.hi - shape.lo).prod();
        } else if constexpr (std::is_same_v<T, EuclideanDisk>) {
          return unit_ball_volume(2) * shape.radius * shape.radius;
        } else {
          throw std::logic_error("euclidean_area on a hyperbolic domain");
        }
      },
      d.kind());
}

}  // namespace

ScenarioConfig parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("document must be a JSON object");
  reject_unknown_keys(doc,
                      {"domain", "target_h", "refinements", "k_max", "kinds", "functional",
                       "tolerances", "eps_cone_override", "output"},
                      "configuration");
  if (!doc.contains("domain")) config_error("missing required field \"domain\"");

  Domain domain = [&] {
    try {
      return Domain::from_json(doc.at("domain"));
    } catch (const GeometryError& e) {
      config_error(std::string("domain: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
      config_error(std::string("domain: ") + e.what());
    } catch (const std::invalid_argument& e) {
      config_error(std::string("domain: ") + e.what());
    }
  }();
  if (domain.dimension() != 2)
    config_error("only two-dimensional domains are meshable; got n=" +
                 std::to_string(domain.dimension()));

  ScenarioConfig config(std::move(domain));
  config.target_h = require_positive_number(doc, "target_h", config.target_h);
  config.refinements = require_int(doc, "refinements", 0, 0, kMaxRefinements);
  config.k_max = require_int(doc, "k_max", 1, 1, 100000);

  if (doc.contains("kinds"))
    for (const auto& key : string_list(doc.at("kinds"), "kinds")) {
      try {
        config.kinds.push_back(inequality_from_key(key));
      } catch (const std::invalid_argument&) {
        config_error("unknown inequality kind \"" + key + "\"");
      }
    }

  if (doc.contains("functional"))
    for (const auto& name : string_list(doc.at("functional"), "functional")) {
      TestFunctionSpec f;
      try {
        f = family_from_name(name, 2);
      } catch (const std::invalid_argument& e) {
        config_error(std::string("functional: ") + e.what());
      }
      if (!config.domain.hyperbolic() && f.family != TestFamily::Coordinate)
        config_error("functional test \"" + name +
                     "\" needs a hyperbolic domain; Euclidean domains admit "
                     "coordinate functions only");
      config.functional.push_back(f);
    }

  if (doc.contains("tolerances")) {
    const auto& tol = doc.at("tolerances");
    if (!tol.is_object()) config_error("tolerances must be an object");
    reject_unknown_keys(tol, {"functional_tol", "eig_residual_tol"}, "tolerances");
    config.functional_tol =
        require_positive_number(tol, "functional_tol", config.functional_tol);
    config.eig_residual_tol =
        require_positive_number(tol, "eig_residual_tol", config.eig_residual_tol);
  }

  if (doc.contains("eps_cone_override")) {
    const auto& v = doc.at("eps_cone_override");
    if (!v.is_number()) config_error("eps_cone_override must be a number");
    const double eps = v.get<double>();
    if (!(eps > 0.0)) config_error("eps_cone_override must be positive");
    config.eps_cone_override = eps;
  }

  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    if (!out.is_object()) config_error("output must be an object");
    reject_unknown_keys(out, {"json", "csv", "mesh_prefix"}, "output");
    auto take = [&](const char* field, std::string& into) {
      if (!out.contains(field)) return;
      if (!out.at(field).is_string()) config_error(std::string(field) + " must be a string");
      into = out.at(field).get<std::string>();
    };
    take("json", config.output.json_path);
    take("csv", config.output.csv_path);
    take("mesh_prefix", config.output.mesh_prefix);
    if (config.output.json_path.empty() || config.output.csv_path.empty())
      config_error("output.json and output.csv must be nonempty paths");
  }

  nlohmann::ordered_json echo;
  echo["domain"] = config.domain.to_json();
  echo["target_h"] = config.target_h;
  echo["refinements"] = config.refinements;
  echo["k_max"] = config.k_max;
  echo["kinds"] = nlohmann::ordered_json::array();
  for (auto family : config.kinds) echo["kinds"].push_back(inequality_key(family));
  echo["functional"] = nlohmann::ordered_json::array();
  for (const auto& f : config.functional) echo["functional"].push_back(display_name(f));
  echo["tolerances"]["functional_tol"] = config.functional_tol;
  echo["tolerances"]["eig_residual_tol"] = config.eig_residual_tol;
  if (config.eps_cone_override) echo["eps_cone_override"] = *config.eps_cone_override;
  echo["output"]["json"] = config.output.json_path;
  echo["output"]["csv"] = config.output.csv_path;
  echo["output"]["mesh_prefix"] = config.output.mesh_prefix;
  config.echo = std::move(echo);
  return config;
}

void apply_dotted_override(nlohmann::ordered_json& doc, const std::string& dotted,
                           const std::string& value) {
  // Validate the whole path before touching the document, so a malformed
  // name cannot leave a half-created object behind.
  std::vector<std::string> path;
  std::size_t start = 0;
  for (;;) {
    const auto dot = dotted.find('.', start);
    path.push_back(dotted.substr(start, dot - start));
    if (path.back().empty())
      throw std::invalid_argument("malformed override name \"" + dotted + "\"");
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  nlohmann::ordered_json* node = &doc;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->contains(path[i]) || !(*node)[path[i]].is_object())
      (*node)[path[i]] = nlohmann::ordered_json::object();
    node = &(*node)[path[i]];
  }

  const std::string& key = path.back();
  auto parsed = nlohmann::ordered_json::parse(value, nullptr, false);
  if (!parsed.is_discarded()) {
    (*node)[key] = std::move(parsed);
  } else if (value.find(',') != std::string::npos) {
    auto list = nlohmann::ordered_json::array();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) list.push_back(item);
    (*node)[key] = std::move(list);
  } else {
    (*node)[key] = value;
  }
}

namespace {

struct OracleContext {
  std::vector<double> reference;  // empty when no closed-form spectrum applies
  std::string source;
  double radial_ground_state = 0.0;  // geodesic balls only
  bool have_radial = false;
  double volume = 0.0;
};

OracleContext make_oracle_context(const ScenarioConfig& config,
                                  const std::optional<GeometricProfile>& profile) {
  OracleContext ctx;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, EuclideanBox>) {
          ctx.reference = euclidean_box_spectrum(shape.hi[0] - shape.lo[0],
                                                 shape.hi[1] - shape.lo[1],
                                                 config.k_max + 1);
          ctx.source = "separable_box";
        } else if constexpr (std::is_same_v<T, EuclideanDisk>) {
          ctx.reference =
              reference_spectrum(DiskShape{shape.radius}, config.k_max + 1).flatten();
          ctx.source = reference_source_name(ReferenceSource::BesselDisk);
        } else if constexpr (std::is_same_v<T, GeodesicBall>) {
          ctx.radial_ground_state = hyperbolic_ball_radial(shape.radius, 2, 1)[0];
          ctx.have_radial = true;
        }
      },
      config.domain.kind());
  ctx.volume =
      profile ? profile->hyperbolic_volume : euclidean_area(config.domain);
  return ctx;
}

nlohmann::ordered_json oracle_json(const OracleContext& ctx, const Spectrum& spec) {
  nlohmann::ordered_json out;
  if (!ctx.reference.empty()) {
    auto ref = nlohmann::ordered_json::array();
    auto err = nlohmann::ordered_json::array();
    double worst = 0.0;
    const int m = std::min<int>(spec.count(), static_cast<int>(ctx.reference.size()));
    for (int i = 0; i < m; ++i) {
      const double rel =
          std::abs(spec.eigenvalues[i] - ctx.reference[i]) / ctx.reference[i];
      ref.push_back(ctx.reference[i]);
      err.push_back(rel);
      worst = std::max(worst, rel);
    }
    out["reference"]["source"] = ctx.source;
    out["reference"]["values"] = std::move(ref);
    out["reference"]["rel_err"] = std::move(err);
    out["reference"]["max_rel_err"] = worst;
  }
  if (ctx.have_radial) {
    const double computed = spec.eigenvalues.front();
    out["radial_ground_state"]["reference"] = ctx.radial_ground_state;
    out["radial_ground_state"]["computed"] = computed;
    out["radial_ground_state"]["rel_err"] =
        std::abs(computed - ctx.radial_ground_state) / ctx.radial_ground_state;
  }
  auto prediction = nlohmann::ordered_json::array();
  auto ratio = nlohmann::ordered_json::array();
  for (int k = 1; k <= spec.count(); ++k) {
    const double w = weyl_prediction(k, spec.n, ctx.volume);
    prediction.push_back(w);
    ratio.push_back(spec.eigenvalues[k - 1] / w);
  }
  out["weyl"]["volume"] = ctx.volume;
  out["weyl"]["prediction"] = std::move(prediction);
  out["weyl"]["ratio"] = std::move(ratio);
  return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult result;
  result.config_echo = config.echo;
  const bool hyper = config.domain.hyperbolic();
  const Metric metric = hyper ? Metric::Hyperbolic : Metric::Euclidean;
  if (hyper) result.profile = geometric_profile(config.domain);

  std::vector<InequalityKind> kinds;
  kinds.reserve(config.kinds.size());
  for (auto family : config.kinds)
    kinds.push_back(InequalityKind::make(
        family, 2, metric, result.profile,
        family == InequalityFamily::EpsCone ? config.eps_cone_override : std::nullopt));

  const OracleContext oracle = make_oracle_context(config, result.profile);

  auto note_failure = [&result](std::string line) {
    result.hard_pass = false;
    result.failures.push_back(std::move(line));
  };

  Mesh mesh = generate(config.domain, config.target_h);
  std::vector<double> previous;
  for (int level = 0; level <= config.refinements; ++level) {
    if (level > 0) mesh = refine(mesh);
    auto shared = std::make_shared<const Mesh>(mesh);
    const AssembledForms forms = assemble(*shared, metric, 2);
    const AssembledForms interior = apply_dirichlet(forms, *shared);
    if (interior.dof_count() < config.k_max + 1)
      throw NumericalError("level " + std::to_string(level) + " has " +
                           std::to_string(interior.dof_count()) +
                           " interior unknowns, not enough for k_max=" +
                           std::to_string(config.k_max) +
                           "; lower target_h or k_max");

    Spectrum spec = solve_lowest(interior, config.k_max + 1, shared);
    const double residual = max_relative_residual(interior, spec);
    if (residual > config.eig_residual_tol)
      throw NumericalError("level " + std::to_string(level) +
                           ": eigenpair residual " + fmt17(residual) +
                           " exceeds tolerance " + fmt17(config.eig_residual_tol));

    // Nested P1 spaces make every Ritz value monotone under refinement; a
    // violation beyond roundoff means the solve went wrong.
    if (!previous.empty())
      for (std::size_t i = 0; i < previous.size(); ++i)
        if (spec.eigenvalues[i] > previous[i] * (1.0 + 1e-10))
          throw NumericalError("eigenvalue " + std::to_string(i + 1) +
                               " increased under refinement at level " +
                               std::to_string(level) + ": " + fmt17(previous[i]) +
                               " -> " + fmt17(spec.eigenvalues[i]));
    previous = spec.eigenvalues;

    LevelResult lr;
    lr.level = level;
    lr.h = shared->h;
    lr.dof = interior.dof_count();

    for (const auto& kind : kinds)
      for (int k = 1; k <= config.k_max; ++k) {
        InequalityReport report = check(kind, spec.eigenvalues, k);
        report.h = lr.h;
        report.dof = lr.dof;
        const bool hard = report.admissible && report.defined && !report.conjecture;
        if (hard && !report.satisfied)
          note_failure(std::string(inequality_key(report.family)) + " violated at k=" +
                       std::to_string(k) + ", level " + std::to_string(level) +
                       " (lhs " + fmt17(report.lhs) + " > rhs " + fmt17(report.rhs) + ")");
        lr.inequalities.push_back(std::move(report));
      }

    for (const auto& f : config.functional) {
      const FunctionalCheck fc =
          functional_check(spec, f, config.k_max, *shared, config.functional_tol);
      FunctionalEntry entry;
      entry.name = display_name(f);
      entry.k = config.k_max;
      entry.lhs = fc.lhs;
      entry.rhs = fc.rhs;
      entry.satisfied = fc.satisfied;
      if (!fc.satisfied)
        note_failure("functional check " + entry.name + " violated at level " +
                     std::to_string(level) + " (lhs " + fmt17(fc.lhs) + " > rhs " +
                     fmt17(fc.rhs) + ")");
      lr.functional.push_back(std::move(entry));
    }

    lr.oracle = oracle_json(oracle, spec);
    lr.spectrum = std::move(spec);
    result.levels.push_back(std::move(lr));
  }
  return result;
}

nlohmann::ordered_json ScenarioResult::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["config"] = config_echo;
  doc["profile"] = profile ? profile->to_json() : nlohmann::ordered_json(nullptr);
  doc["levels"] = nlohmann::ordered_json::array();
  for (const auto& level : levels) {
    nlohmann::ordered_json lj;
    lj["level"] = level.level;
    lj["h"] = level.h;
    lj["dof"] = level.dof;
    lj["spectrum"] = level.spectrum.to_json();
    lj["inequalities"] = nlohmann::ordered_json::array();
    for (const auto& report : level.inequalities)
      lj["inequalities"].push_back(report.to_json());
    lj["functional"] = nlohmann::ordered_json::array();
    for (const auto& entry : level.functional) {
      nlohmann::ordered_json fj;
      fj["f"] = entry.name;
      fj["k"] = entry.k;
      fj["lhs"] = entry.lhs;
      fj["rhs"] = entry.rhs;
      fj["satisfied"] = entry.satisfied;
      lj["functional"].push_back(std::move(fj));
    }
    lj["oracle"] = level.oracle;
    doc["levels"].push_back(std::move(lj));
  }
  doc["hard_pass"] = hard_pass;
  doc["failures"] = failures;
  return doc;
}

std::string ScenarioResult::to_csv() const {
  std::string out = InequalityReport::csv_header() + "\n";
  for (const auto& level : levels)
    for (const auto& report : level.inequalities) out += report.csv_row() + "\n";
  return out;
}

void emit_report(const ScenarioResult& result, const ScenarioOutputs& output) {
  write_json_file(output.json_path, result.to_json());
  std::ofstream csv(output.csv_path, std::ios::binary);
  csv << result.to_csv();
  if (!csv) throw std::runtime_error("cannot write " + output.csv_path);
  csv.close();
  if (!output.mesh_prefix.empty())
    for (const auto& level : result.levels) {
      const std::string path =
          output.mesh_prefix + "_level" + std::to_string(level.level) + ".txt";
      std::ofstream ms(path, std::ios::binary);
      if (level.spectrum.mesh) write_mesh(*level.spectrum.mesh, ms);
      if (!ms) throw std::runtime_error("cannot write " + path);
    }
}

namespace {

nlohmann::ordered_json section(const char* name, bool pass) {
  nlohmann::ordered_json s;
  s["name"] = name;
  s["pass"] = pass;
  return s;
}

nlohmann::ordered_json validate_bessel() {
  bool ok = true;
  auto zeros = nlohmann::ordered_json::array();
  double table[3][3];
  for (int m = 0; m < 3; ++m) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 1; k <= 3; ++k) {
      table[m][k - 1] = bessel_zero(m, k);
      row.push_back(table[m][k - 1]);
    }
    zeros.push_back(std::move(row));
  }
  ok = ok && std::abs(table[0][0] - 2.404825557695773) < 1e-10;
  ok = ok && std::abs(table[1][0] - 3.831705970207512) < 1e-10;
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 2; ++k) ok = ok && table[m][k] < table[m][k + 1];
  for (int m = 0; m < 2; ++m) ok = ok && table[m][0] < table[m + 1][0];
  auto s = section("bessel_zeros", ok);
  s["zeros"] = std::move(zeros);
  return s;
}

nlohmann::ordered_json validate_reference_spectra() {
  bool ok = true;
  const auto square = reference_spectrum(UnitSquareShape{}, 10).flatten();
  static const int lattice[10] = {2, 5, 5, 8, 10, 10, 13, 13, 17, 17};
  const double pi2 = 9.869604401089358;  // pi^2
  for (int i = 0; i < 10; ++i)
    ok = ok && std::abs(square[i] - pi2 * lattice[i]) < 1e-10 * square[i];
  const auto disk = reference_spectrum(DiskShape{1.0}, 5).flatten();
  ok = ok && std::abs(disk[0] - 5.783185962946785) < 1e-10;
  ok = ok && disk[1] == disk[2];  // first angular pair is exactly twofold
  auto s = section("reference_spectra", ok);
  s["unit_square"] = square;
  s["unit_disk"] = disk;
  return s;
}

nlohmann::ordered_json validate_radial_shooting() {
  bool ok = true;
  const auto two = hyperbolic_ball_radial(1.0, 2, 2);
  ok = ok && std::abs(two[0] - 6.1130818198864745) < 1e-8 * two[0];
  const auto three = hyperbolic_ball_radial(1.0, 3, 2);
  const double pi = 3.141592653589793;
  // In 3-space the substitution u = w/sinh(t) reduces the radial equation to
  // w'' + (lambda-1) w = 0, so lambda_k = 1 + (k pi / r)^2 exactly.
  for (int k = 1; k <= 2; ++k)
    ok = ok && std::abs(three[k - 1] - (1.0 + k * k * pi * pi)) < 1e-8 * three[k - 1];
  const double floor_probe = hyperbolic_ball_radial(30.0, 2, 1)[0];
  ok = ok && floor_probe > 0.25 && floor_probe < 0.2651;
  auto s = section("radial_shooting", ok);
  s["ball_r1_n2"] = two;
  s["ball_r1_n3"] = three;
  s["ball_r30_n2_ground"] = floor_probe;
  return s;
}

nlohmann::ordered_json validate_conformal() {
  double worst_fd = 0.0;
  double worst_contraction = 0.0;
  for (int n : {2, 3, 5}) {
    std::vector<TestFunctionSpec> specs;
    specs.push_back({TestFamily::Coordinate, 1, n});
    specs.push_back({TestFamily::LogHeight, 1, n});
    specs.push_back({TestFamily::ArcsinhRatio, 1, n});
    if (n > 2) specs.push_back({TestFamily::ArcsinhRatio, n - 1, n});
    for (double height : {0.5, 1.3}) {
      for (double lateral : {-0.7, 0.4}) {
        Point x = Point::Constant(n, lateral);
        x[n - 1] = height;
        for (const auto& spec : specs) {
          worst_fd = std::max(worst_fd, fd_check(spec, x).rel_err);
          const auto v = eval_test_function(spec, x);
          worst_contraction =
              std::max(worst_contraction,
                       std::abs(height * height * v.grad0.squaredNorm() - v.grad_norm_sq));
        }
      }
    }
  }
  auto s = section("conformal_calculus", worst_fd <= 1e-6 && worst_contraction <= 1e-12);
  s["max_fd_rel_err"] = worst_fd;
  s["max_contraction_defect"] = worst_contraction;
  return s;
}

nlohmann::ordered_json validate_exact_inequalities() {
  bool ok = true;
  const auto square = reference_spectrum(UnitSquareShape{}, 30).flatten();
  const auto yang = InequalityKind::make(InequalityFamily::Yang, 2, Metric::Euclidean);
  for (int k = 1; k <= 29; ++k) {
    ok = ok && check(yang, square, k).satisfied;
    const auto classic = classic_checks(square, k, 2);
    ok = ok && classic.first.satisfied && classic.second.satisfied;
  }
  const auto bound = implied_bound({square[0]}, 2.0, 0.0);
  ok = ok && bound && std::abs(*bound - 3.0 * square[0]) < 1e-12 * square[0];
  auto s = section("exact_inequalities", ok);
  return s;
}

nlohmann::ordered_json fem_square_section() {
  bool ok = true;
  auto vec2 = [](double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
  };
  const Domain square = Domain::euclidean_box(vec2(0.0, 0.0), vec2(1.0, 1.0));
  Mesh mesh = generate(square, 0.25);
  mesh = refine(refine(refine(mesh)));  // axis spacing 1/32
  auto shared = std::make_shared<const Mesh>(std::move(mesh));
  const auto interior = apply_dirichlet(assemble(*shared, Metric::Euclidean, 2), *shared);
  const Spectrum spec = solve_lowest(interior, 6, shared);
  const double pi2 = 9.869604401089358;
  ok = ok && std::abs(spec.eigenvalues[0] - 2.0 * pi2) < 0.005 * 2.0 * pi2;
  ok = ok && std::abs(spec.eigenvalues[4] - 10.0 * pi2) < 0.02 * 10.0 * pi2;
  auto s = section("fem_unit_square", ok);
  s["eigenvalues"] = spec.eigenvalues;
  return s;
}

nlohmann::ordered_json fem_hyperbolic_section() {
  bool ok = true;
  auto vec2 = [](double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
  };
  const Domain box = Domain::half_space_box(vec2(0.0, 1.0), vec2(1.0, 2.0));
  const GeometricProfile profile = geometric_profile(box);
  Mesh mesh = refine(generate(box, 0.25));
  auto shared = std::make_shared<const Mesh>(std::move(mesh));
  const auto interior = apply_dirichlet(assemble(*shared, Metric::Hyperbolic, 2), *shared);
  const Spectrum spec = solve_lowest(interior, 6, shared);
  for (double ev : spec.eigenvalues) ok = ok && ev >= 0.25;
  const auto cy = InequalityKind::make(InequalityFamily::ChengYangHyperbolic, 2,
                                       Metric::Hyperbolic);
  const auto sharp = InequalityKind::make(InequalityFamily::RhoYangSharp, 2,
                                          Metric::Hyperbolic, profile);
  const auto cone =
      InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic, profile);
  ok = ok && cone.admissible;
  for (int k = 1; k <= 5; ++k) {
    ok = ok && check(cy, spec.eigenvalues, k).satisfied;
    ok = ok && check(sharp, spec.eigenvalues, k).satisfied;
    ok = ok && check(cone, spec.eigenvalues, k).satisfied;
  }
  const TestFunctionSpec log_height{TestFamily::LogHeight, 1, 2};
  const FunctionalCheck fc = functional_check(spec, log_height, 3, *shared);
  ok = ok && fc.satisfied;
  auto s = section("fem_hyperbolic_box", ok);
  s["eigenvalues"] = spec.eigenvalues;
  s["rho_ratio"] = profile.rho_ratio;
  s["functional_log_height"] = {{"lhs", fc.lhs}, {"rhs", fc.rhs}};
  return s;
}

}  // namespace

ValidationResult run_validation() {
  ValidationResult out;
  auto sections = nlohmann::ordered_json::array();
  sections.push_back(validate_bessel());
  sections.push_back(validate_reference_spectra());
  sections.push_back(validate_radial_shooting());
  sections.push_back(validate_conformal());
  sections.push_back(validate_exact_inequalities());
  sections.push_back(fem_square_section());
  sections.push_back(fem_hyperbolic_section());
  bool pass = true;
  for (const auto& s : sections) pass = pass && s.at("pass").get<bool>();
  out.report["schema_version"] = 1;
  out.report["sections"] = std::move(sections);
  out.report["pass"] = pass;
  out.pass = pass;
  return out;
}

}  // namespace hyperspec
