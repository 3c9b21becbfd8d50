// Command-line front end: solve a scenario configuration, check inequalities
// on a stored spectrum, run the deterministic validation suite, or print a
// reference spectrum.  Exit codes: 0 success, 1 a hard check failed, 2 bad
// configuration or usage, 3 numerical failure, 4 unwritable output.

#include <CLI11.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <hyperspec/errors.hpp>
#include <hyperspec/inequalities.hpp>
#include <hyperspec/jsonio.hpp>
#include <hyperspec/oracles.hpp>
#include <hyperspec/scenario.hpp>

using namespace hyperspec;

namespace {

void apply_thread_cap() {
  const char* text = std::getenv("HYPERSPEC_THREADS");
  if (!text) return;
  char* end = nullptr;
  const long v = std::strtol(text, &end, 10);
  if (end == text || *end != '\0' || v < 1) {
    std::cerr << "ignoring HYPERSPEC_THREADS=\"" << text << "\" (need a positive integer)\n";
    return;
  }
  Eigen::setNbThreads(static_cast<int>(v));
}

nlohmann::ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  return nlohmann::ordered_json::parse(in);
}

// Leftover "--dotted.name value" or "--dotted.name=value" tokens.
std::vector<std::pair<std::string, std::string>> extract_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string token = extras[i];
    if (token.rfind("--", 0) != 0)
      throw std::invalid_argument("unexpected argument \"" + token +
                                  "\"; overrides look like --field.path value");
    token = token.substr(2);
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    } else {
      if (i + 1 == extras.size())
        throw std::invalid_argument("override --" + token + " needs a value");
      out.emplace_back(token, extras[++i]);
    }
  }
  return out;
}

// "3" or "1..10" -> inclusive [lo, hi].
std::pair<int, int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int k = std::stoi(text);
      return {k, k};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse k range \"" + text +
                                "\"; expected a number or lo..hi");
  }
}

int cmd_solve(const std::string& config_path, const std::vector<std::string>& extras) {
  nlohmann::ordered_json doc = read_json_file(config_path);
  for (const auto& [name, value] : extract_overrides(extras))
    apply_dotted_override(doc, name, value);
  const ScenarioConfig config = parse_scenario(doc);
  const ScenarioResult result = run_scenario(config);
  emit_report(result, config.output);
  for (const auto& level : result.levels)
    std::cout << "level " << level.level << ": h=" << fmt17(level.h)
              << " dof=" << level.dof
              << " lambda_1=" << fmt17(level.spectrum.eigenvalues.front()) << "\n";
  for (const auto& line : result.failures) std::cout << "FAIL " << line << "\n";
  std::cout << "hard checks: " << (result.hard_pass ? "pass" : "FAIL") << "\n";
  std::cout << "report: " << config.output.json_path << " " << config.output.csv_path
            << "\n";
  return result.hard_pass ? 0 : 1;
}

int cmd_check(const std::string& spectrum_path, const std::string& kinds_csv,
              const std::string& k_range, const std::string& domain_path,
              const std::string& json_out, const std::string& csv_out) {
  const Spectrum spec = Spectrum::from_json(read_json_file(spectrum_path));

  std::vector<InequalityFamily> families;
  {
    std::stringstream ss(kinds_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) families.push_back(inequality_from_key(item));
  }
  if (families.empty()) throw std::invalid_argument("--kinds lists no inequality kinds");

  const auto [k_lo, k_hi] = parse_k_range(k_range);
  if (k_lo < 1 || k_lo > k_hi)
    throw std::invalid_argument("invalid k range " + k_range);
  if (k_hi > spec.count() - 1)
    throw std::invalid_argument("k up to " + std::to_string(k_hi) + " needs " +
                                std::to_string(k_hi + 1) + " eigenvalues; the spectrum holds " +
                                std::to_string(spec.count()));

  std::optional<GeometricProfile> profile;
  if (!domain_path.empty()) {
    const Domain d = Domain::from_json(read_json_file(domain_path));
    if (d.hyperbolic()) profile = geometric_profile(d);
  }

  bool hard_pass = true;
  std::string csv = InequalityReport::csv_header() + "\n";
  auto reports = nlohmann::ordered_json::array();
  for (const auto family : families) {
    const InequalityKind kind = InequalityKind::make(family, spec.n, spec.metric, profile);
    for (int k = k_lo; k <= k_hi; ++k) {
      InequalityReport report = check(kind, spec.eigenvalues, k);
      report.h = spec.h;
      report.dof = spec.dof();
      if (report.admissible && report.defined && !report.conjecture && !report.satisfied)
        hard_pass = false;
      csv += report.csv_row() + "\n";
      reports.push_back(report.to_json());
    }
  }

  std::cout << csv;
  if (!json_out.empty()) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["reports"] = std::move(reports);
    write_json_file(json_out, doc);
  }
  if (!csv_out.empty()) {
    std::ofstream out(csv_out, std::ios::binary);
    out << csv;
    if (!out) throw std::runtime_error("cannot write " + csv_out);
  }
  return hard_pass ? 0 : 1;
}

int cmd_validate(const std::string& out_path) {
  const ValidationResult result = run_validation();
  std::cout << dump_deterministic(result.report) << "\n";
  if (!out_path.empty()) write_json_file(out_path, result.report);
  return result.pass ? 0 : 1;
}

int cmd_oracle(const std::string& shape, double radius, int count, int n,
               const std::string& out_path) {
  ReferenceSpectrum ref;
  if (shape == "square") {
    ref = reference_spectrum(UnitSquareShape{}, count);
  } else if (shape == "disk") {
    ref = reference_spectrum(DiskShape{radius}, count);
  } else if (shape == "ball") {
    ref = radial_ball_reference(radius, n, count);
  } else {
    throw std::invalid_argument("unknown shape \"" + shape +
                                "\"; expected square, disk, or ball");
  }
  std::cout << dump_deterministic(ref.to_json()) << "\n";
  if (!out_path.empty()) write_json_file(out_path, ref.to_json());
  return 0;
}

template <typename F>
int run_guarded(F&& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateProblemError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const GeometryError& e) {
    std::cerr << "geometry failure: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"Dirichlet spectra on hyperbolic and Euclidean plane domains"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand(
      "solve", "Run a scenario configuration and write JSON/CSV reports");
  solve->allow_extras();
  std::string config_path;
  solve->add_option("--config", config_path, "scenario configuration JSON")->required();

  auto* check_cmd =
      app.add_subcommand("check", "Evaluate eigenvalue inequalities on a stored spectrum");
  std::string spectrum_path, kinds_csv, k_range = "1", domain_path, check_json, check_csv;
  check_cmd->add_option("--spectrum", spectrum_path, "spectrum JSON (eigenvalues, n, metric)")
      ->required();
  check_cmd->add_option("--kinds", kinds_csv, "comma-separated inequality kinds")->required();
  check_cmd->add_option("--k", k_range, "truncation index or range, e.g. 4 or 1..10");
  check_cmd->add_option("--domain", domain_path,
                        "domain JSON supplying the geometric profile for "
                        "shape-dependent kinds");
  check_cmd->add_option("--json", check_json, "also write reports as JSON here");
  check_cmd->add_option("--csv", check_csv, "also write the CSV table here");

  auto* validate =
      app.add_subcommand("validate", "Run the deterministic self-check suite");
  std::string validate_out;
  validate->add_option("--out", validate_out, "also write the validation report here");

  auto* oracle = app.add_subcommand("oracle", "Print a reference spectrum");
  std::string shape;
  double radius = 1.0;
  int count = 10;
  int ball_n = 2;
  oracle->add_option("--shape", shape, "square, disk, or ball")->required();
  oracle->add_option("--radius", radius, "disk or geodesic-ball radius");
  oracle->add_option("--count", count, "number of eigenvalues");
  oracle->add_option("--n", ball_n, "hyperbolic dimension (ball only)");
  std::string oracle_out;
  oracle->add_option("--out", oracle_out, "also write the spectrum JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help and version exit cleanly
  }

  if (*solve) return run_guarded([&] { return cmd_solve(config_path, solve->remaining()); });
  if (*check_cmd)
    return run_guarded([&] {
      return cmd_check(spectrum_path, kinds_csv, k_range, domain_path, check_json, check_csv);
    });
  if (*validate) return run_guarded([&] { return cmd_validate(validate_out); });
  if (*oracle)
    return run_guarded([&] { return cmd_oracle(shape, radius, count, ball_n, oracle_out); });
  return 2;
}
