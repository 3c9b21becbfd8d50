#include "hyperspec/inequalities.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyperspec/fem.hpp"
#include "hyperspec/jsonio.hpp"
#include "hyperspec/oracles.hpp"

using namespace hyperspec;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

GeometricProfile box_profile() {
  // Reference box [0,1] x [1,2]: height range [1,2].
  return geometric_profile(Domain::half_space_box(vec2(0.0, 1.0), vec2(1.0, 2.0)));
}

GeometricProfile ball_profile(double r) {
  return geometric_profile(Domain::geodesic_ball(r, 1.0, 2));
}

}  // namespace

TEST_CASE("sum template arithmetic on tiny spectra") {
  const auto degenerate = sum_inequality_eval({1.0, 1.0}, 1, 7.0, 0.0);
  CHECK(degenerate.first == 0.0);
  CHECK(degenerate.second == 0.0);

  const auto equality = sum_inequality_eval({1.0, 3.0}, 1, 2.0, 0.0);
  CHECK(equality.first == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(equality.second == doctest::Approx(4.0).epsilon(1e-15));

  const auto shifted = sum_inequality_eval({0.3, 0.5, 0.9}, 2, 4.0, 0.25);
  CHECK(shifted.first == doctest::Approx(0.52).epsilon(1e-14));
  CHECK(shifted.second == doctest::Approx(0.52).epsilon(1e-14));

  CHECK_THROWS_AS(sum_inequality_eval({1.0, 3.0}, 0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sum_inequality_eval({1.0, 3.0}, 2, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sum_inequality_eval({3.0, 1.0}, 1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sum template structural properties") {
  const std::vector<double> eigs = {0.7, 1.1, 1.8, 2.4, 3.9};
  const int k = 3;

  const auto once = sum_inequality_eval(eigs, k, 1.5, 0.2);
  const auto twice = sum_inequality_eval(eigs, k, 3.0, 0.2);
  CHECK(twice.first == once.first);
  CHECK(twice.second == doctest::Approx(2.0 * once.second).epsilon(1e-15));

  // Values beyond index k+1 are never touched.
  std::vector<double> extended = eigs;
  extended.push_back(100.0);
  const auto ext = sum_inequality_eval(extended, k, 1.5, 0.2);
  CHECK(ext.first == once.first);
  CHECK(ext.second == once.second);

  // Translating the spectrum and the shift together changes nothing.
  std::vector<double> moved;
  for (const double l : eigs) moved.push_back(l + 5.25);
  const auto trans = sum_inequality_eval(moved, k, 1.5, 0.2 + 5.25);
  CHECK(trans.first == doctest::Approx(once.first).epsilon(1e-12));
  CHECK(trans.second == doctest::Approx(once.second).epsilon(1e-12));
}

TEST_CASE("kind construction realizes the right constants") {
  const auto yang2 = InequalityKind::make(InequalityFamily::Yang, 2, Metric::Euclidean);
  CHECK(yang2.C == 2.0);
  CHECK(yang2.a == 0.0);
  CHECK(yang2.admissible);
  CHECK(yang2.sum_template);

  const auto yang3 = InequalityKind::make(InequalityFamily::Yang, 3, Metric::Euclidean);
  CHECK(yang3.C == doctest::Approx(4.0 / 3.0).epsilon(1e-16));

  const auto cy2 = InequalityKind::make(InequalityFamily::ChengYangHyperbolic, 2,
                                        Metric::Hyperbolic);
  CHECK(cy2.C == 4.0);
  CHECK(cy2.a == 0.25);
  CHECK(cy2.admissible);

  const auto cy3 = InequalityKind::make(InequalityFamily::ChengYangHyperbolic, 3,
                                        Metric::Hyperbolic);
  CHECK(cy3.a == 1.0);

  const auto profile = box_profile();
  const auto lz3 = InequalityKind::make(InequalityFamily::LuoZheng, 3, Metric::Hyperbolic,
                                        profile);
  CHECK(lz3.a == doctest::Approx(-0.25).epsilon(1e-16));
  CHECK(lz3.C == doctest::Approx(profile.rho_ratio * 4.0 / 3.0).epsilon(1e-15));
  CHECK(lz3.rho_ratio.has_value());

  const auto sharp = InequalityKind::make(InequalityFamily::RhoYangSharp, 2, Metric::Hyperbolic,
                                          profile);
  CHECK(sharp.C == doctest::Approx(profile.rho_ratio * 2.0).epsilon(1e-15));
  CHECK(sharp.a == 0.25);

  const auto eps_rho = InequalityKind::make(InequalityFamily::EpsRho, 2, Metric::Hyperbolic,
                                            profile);
  CHECK(eps_rho.eps == doctest::Approx(profile.rho_ratio - 1.0).epsilon(1e-15));
  CHECK(eps_rho.C == doctest::Approx(sharp.C).epsilon(1e-15));  // same numbers, distinct kind

  const auto conj = InequalityKind::make(InequalityFamily::ChengConjecture, 2,
                                         Metric::Hyperbolic);
  CHECK(conj.conjecture);
  CHECK(conj.C == 2.0);
  CHECK(conj.a == 0.25);
}

TEST_CASE("cone-condition kind: minimal eps, cap fallback, override") {
  const auto box = box_profile();  // s_max = 1/2, minimal eps = 1 = cap at n=2
  const auto cone = InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic, box);
  REQUIRE(box.eps_cone.has_value());
  CHECK(cone.eps == doctest::Approx(*box.eps_cone).epsilon(1e-15));
  CHECK(cone.admissible);
  CHECK(cone.C == doctest::Approx(4.0 * (1.0 + *box.eps_cone) / 2.0).epsilon(1e-15));

  const auto big_ball = ball_profile(1.0);  // minimal eps above the cap
  CHECK(!big_ball.eps_cone.has_value());
  const auto capped = InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic,
                                           big_ball);
  CHECK(!capped.admissible);
  CHECK(capped.eps == doctest::Approx(eps_cone_cap(2)).epsilon(1e-15));

  const auto small_ball = ball_profile(0.5);
  REQUIRE(small_ball.eps_cone.has_value());
  const auto ok = InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic,
                                       small_ball);
  CHECK(ok.admissible);

  // Overrides: admissible only when the hypothesis actually holds for it.
  const auto tight = InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic, box,
                                          0.9);
  CHECK(!tight.admissible);  // 0.81/1.9 < 1/2
  const auto at_cap = InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic, box,
                                           1.0);
  CHECK(at_cap.admissible);

  CHECK_THROWS_AS(InequalityKind::make(InequalityFamily::EpsCone, 2, Metric::Hyperbolic),
                  std::invalid_argument);
  CHECK_THROWS_AS(InequalityKind::make(InequalityFamily::LuoZheng, 2, Metric::Hyperbolic),
                  std::invalid_argument);
  CHECK_THROWS_AS(InequalityKind::make(InequalityFamily::Yang, 2, Metric::Euclidean,
                                       std::nullopt, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(InequalityKind::make(InequalityFamily::Yang, 1, Metric::Euclidean),
                  std::invalid_argument);
}

TEST_CASE("admissibility tracks the metric") {
  CHECK(!InequalityKind::make(InequalityFamily::Yang, 2, Metric::Hyperbolic).admissible);
  CHECK(!InequalityKind::make(InequalityFamily::Ppw, 2, Metric::Hyperbolic).admissible);
  CHECK(!InequalityKind::make(InequalityFamily::ChengYangHyperbolic, 2, Metric::Euclidean)
             .admissible);
  const auto profile = box_profile();
  CHECK(!InequalityKind::make(InequalityFamily::RhoYangSharp, 2, Metric::Euclidean, profile)
             .admissible);
}

TEST_CASE("kind keys round trip") {
  for (const auto family : all_inequality_families()) {
    CHECK(inequality_from_key(inequality_key(family)) == family);
  }
  CHECK(inequality_key(InequalityFamily::Yang) == std::string("yang"));
  CHECK(inequality_key(InequalityFamily::ChengYangHyperbolic) ==
        std::string("cheng_yang_hyperbolic"));
  CHECK_THROWS_AS(inequality_from_key("unknown"), std::invalid_argument);
}

TEST_CASE("check fills reports and honors equality boundaries") {
  const auto yang = InequalityKind::make(InequalityFamily::Yang, 2, Metric::Euclidean);
  const auto boundary = check(yang, {1.0, 3.0}, 1);
  CHECK(boundary.satisfied);
  CHECK(std::abs(boundary.slack) <= 1e-12);
  CHECK(boundary.lhs == doctest::Approx(4.0).epsilon(1e-15));

  const auto profile = box_profile();
  const std::vector<double> eigs = {1.0, 2.0, 3.5, 5.0};
  for (const int n : {2, 3, 4, 5}) {
    const auto lz = check(
        InequalityKind::make(InequalityFamily::LuoZheng, n, Metric::Hyperbolic, profile), eigs,
        2);
    const auto sharp = check(
        InequalityKind::make(InequalityFamily::RhoYangSharp, n, Metric::Hyperbolic, profile),
        eigs, 2);
    CHECK(sharp.rhs < lz.rhs);  // larger shift, same coefficient
    CHECK(sharp.lhs == lz.lhs);
  }

  const auto cy = check(
      InequalityKind::make(InequalityFamily::ChengYangHyperbolic, 2, Metric::Hyperbolic), eigs,
      2);
  const auto conj = check(
      InequalityKind::make(InequalityFamily::ChengConjecture, 2, Metric::Hyperbolic), eigs, 2);
  CHECK(conj.rhs <= cy.rhs);
  CHECK(conj.conjecture);
  CHECK((conj.satisfied ? cy.satisfied : true));  // conjecture implies the theorem
}

TEST_CASE("classical gap and quotient checks") {
  const auto [ppw_eq, hp_eq] = classic_checks({1.0, 3.0}, 1, 2);
  CHECK(ppw_eq.satisfied);
  CHECK(ppw_eq.lhs == 2.0);
  CHECK(ppw_eq.rhs == 2.0);
  CHECK(hp_eq.satisfied);
  CHECK(hp_eq.lhs == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hp_eq.rhs == 0.5);

  const auto [ppw_bad, hp_bad] = classic_checks({2.0, 10.0}, 1, 2);
  CHECK(!ppw_bad.satisfied);  // gap 8 exceeds (4/n) sum = 4
  CHECK(ppw_bad.lhs == 8.0);
  CHECK(ppw_bad.rhs == 4.0);
  CHECK(!hp_bad.satisfied);  // 2/8 < 1/2
  CHECK(hp_bad.defined);

  const auto [ppw_deg, hp_deg] = classic_checks({1.0, 2.0, 2.0}, 2, 2);
  CHECK(ppw_deg.satisfied);  // zero gap
  CHECK(!hp_deg.defined);
  CHECK(hp_deg.satisfied);  // divergent quotient beats any finite bound
  CHECK(std::isnan(hp_deg.lhs));
}

TEST_CASE("implied bounds extract the quadratic root") {
  for (const int n : {2, 3, 5}) {
    const double L = 1.7;
    const auto bound = implied_bound({L}, 4.0 / n, 0.0);
    REQUIRE(bound.has_value());
    CHECK(*bound == doctest::Approx((1.0 + 4.0 / n) * L).epsilon(1e-12));
  }
  const auto shifted = implied_bound({1.0}, 4.0, 0.25);
  REQUIRE(shifted.has_value());
  CHECK(*shifted == doctest::Approx(4.0).epsilon(1e-12));

  // Sum of two parabolas with disjoint root pairs can be positive
  // everywhere: the inequality then constrains nothing at this k.
  CHECK(!implied_bound({0.0, 10.0}, 1.0, 5.0).has_value());

  // Widening C relaxes the feasible region, so the bound can only grow.
  const std::vector<double> prefix = {2.0, 5.1, 9.7};
  const auto narrow = implied_bound(prefix, 2.0, 0.0);
  const auto wide = implied_bound(prefix, 3.0, 0.0);
  REQUIRE(narrow.has_value());
  REQUIRE(wide.has_value());
  CHECK(*wide >= *narrow);

  CHECK_THROWS_AS(implied_bound({}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("exact disk and square spectra satisfy the Euclidean inequalities") {
  const auto yang = InequalityKind::make(InequalityFamily::Yang, 2, Metric::Euclidean);
  for (const ReferenceShape shape : {ReferenceShape{UnitSquareShape{}},
                                     ReferenceShape{DiskShape{1.0}}}) {
    const auto flat = reference_spectrum(shape, 30).flatten();
    for (int k = 1; k <= 29; ++k) {
      const auto report = check(yang, flat, k);
      CHECK(report.satisfied);
      // A spectrum obeying the template at level k can never overshoot the
      // implied root.
      const std::vector<double> prefix(flat.begin(), flat.begin() + k);
      const auto bound = implied_bound(prefix, yang.C, yang.a);
      REQUIRE(bound.has_value());
      CHECK(flat[k] <= *bound * (1.0 + 1e-12));

      const auto [ppw, hp] = classic_checks(flat, k, 2);
      CHECK(ppw.satisfied);
      CHECK(hp.satisfied);
    }
  }
}

TEST_CASE("reports serialize to stable JSON and CSV") {
  const auto profile = box_profile();
  auto report = check(
      InequalityKind::make(InequalityFamily::RhoYangSharp, 2, Metric::Hyperbolic, profile),
      {1.0, 2.0, 4.0}, 2);
  report.h = 0.125;
  report.dof = 49;

  const auto doc = report.to_json();
  CHECK(doc["kind"] == "rho_yang_sharp");
  CHECK(doc["k"] == 2);
  CHECK(doc["constants"]["C"] == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(doc["constants"]["a"] == 0.25);
  CHECK(doc["constants"]["rho_ratio"] == 4.0);
  CHECK(doc["h"] == 0.125);
  CHECK(doc["dof"] == 49);
  CHECK(!doc["constants"].contains("conjecture"));

  CHECK(InequalityReport::csv_header() ==
        "kind,k,lhs,rhs,slack,satisfied,admissible,C,a,rho_ratio,eps,s_max,h,dof");
  const std::string row = report.csv_row();
  CHECK(row.substr(0, 15) == "rho_yang_sharp,");
  CHECK(row.find(",true,true,") != std::string::npos);
  CHECK(row.find(",49") == row.size() - 3);
  const auto cols = [&] {
    int commas = 0;
    for (const char c : row) commas += (c == ',');
    return commas;
  }();
  CHECK(cols == 13);

  // Classical kinds leave the template columns empty.
  const auto [ppw, hp] = classic_checks({1.0, 2.0, 2.0}, 2, 2);
  const std::string hp_row = hp.csv_row();
  CHECK(hp_row.substr(0, 13) == "hile_protter,");
  CHECK(hp_row.find(",,") != std::string::npos);  // undefined lhs -> empty cell
  const auto conj_doc = check(InequalityKind::make(InequalityFamily::ChengConjecture, 2,
                                                   Metric::Hyperbolic),
                              {1.0, 2.0, 4.0}, 1)
                            .to_json();
  CHECK(conj_doc["constants"]["conjecture"] == true);
  const auto hp_doc = hp.to_json();
  CHECK(hp_doc["defined"] == false);
  CHECK(dump_deterministic(hp_doc).find("\"lhs\": null") != std::string::npos);
}

TEST_CASE("functional check: zero field is degenerate equality") {
  Domain dom = Domain::euclidean_box(vec2(0.0, 0.0), vec2(1.0, 1.0));
  const auto mesh = std::make_shared<Mesh>(refine(generate(dom, 0.5)));
  auto forms = apply_dirichlet(assemble(*mesh, Metric::Euclidean, 2), *mesh);
  const auto spec = solve_lowest(forms, 4, mesh);

  const FieldFn zero = [](const Eigen::Vector2d&) { return FieldSample{}; };
  const auto fc = functional_check_field(spec, *mesh, zero, 3);
  CHECK(fc.lhs == 0.0);
  CHECK(fc.rhs == 0.0);
  CHECK(fc.satisfied);
  for (const double v : fc.a_terms) CHECK(v == 0.0);
  for (const double v : fc.b_terms) CHECK(v == 0.0);
}

TEST_CASE("functional check on Euclidean squares reproduces unit mass") {
  Domain dom = Domain::euclidean_box(vec2(0.0, 0.0), vec2(1.0, 1.0));
  const auto mesh = std::make_shared<Mesh>(generate(dom, 0.125));
  auto forms = apply_dirichlet(assemble(*mesh, Metric::Euclidean, 2), *mesh);
  const auto spec = solve_lowest(forms, 5, mesh);

  for (const int p : {1, 2}) {
    const auto fc = functional_check(spec, {TestFamily::Coordinate, p, 2}, 4, *mesh);
    CHECK(fc.satisfied);
    // With |grad f| = 1 the A-integral is the M-normalization integral, and
    // the quadrature rule is exact for the quadratic integrand.
    for (const double a : fc.a_terms) CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(functional_check(spec, {TestFamily::LogHeight, 1, 2}, 2, *mesh),
                  std::invalid_argument);
  CHECK_THROWS_AS(functional_check(spec, {TestFamily::Coordinate, 3, 2}, 2, *mesh),
                  std::invalid_argument);
}

TEST_CASE("functional check on a hyperbolic box across the test families") {
  Domain dom = Domain::half_space_box(vec2(0.0, 1.0), vec2(1.0, 2.0));
  const auto mesh = std::make_shared<Mesh>(refine(generate(dom, 0.125)));
  auto forms = apply_dirichlet(assemble(*mesh, Metric::Hyperbolic, 2), *mesh);
  const auto spec = solve_lowest(forms, 6, mesh);

  const auto log_fc = functional_check(spec, {TestFamily::LogHeight, 1, 2}, 5, *mesh);
  CHECK(log_fc.satisfied);
  // |grad ln y|^2 = 1, so A_i is again the unit M-normalization integral.
  for (const double a : log_fc.a_terms) CHECK(a == doctest::Approx(1.0).epsilon(1e-12));

  const auto coord_fc = functional_check(spec, {TestFamily::Coordinate, 1, 2}, 5, *mesh);
  CHECK(coord_fc.satisfied);
  const auto asr_fc = functional_check(spec, {TestFamily::ArcsinhRatio, 1, 2}, 5, *mesh);
  CHECK(asr_fc.satisfied);

  CHECK_THROWS_AS(functional_check(spec, {TestFamily::Coordinate, 1, 2}, 6, *mesh),
                  std::invalid_argument);  // needs k+1 eigenpairs
}

TEST_CASE("summed functional checks recover the rho-weighted sum inequality") {
  // Adding the coordinate and log-height checks at n = 2 dominates the
  // two-dimensional rho-weighted statement:
  //   n * sum (l_{k+1}-l_i)^2 (A_i^x + A_i^log) <= rho * 4 * sum (l_{k+1}-l_i)(l_i - 1/4).
  Domain dom = Domain::half_space_box(vec2(0.0, 1.0), vec2(1.0, 2.0));
  const auto profile = geometric_profile(dom);
  const auto mesh = std::make_shared<Mesh>(refine(generate(dom, 0.125)));
  auto forms = apply_dirichlet(assemble(*mesh, Metric::Hyperbolic, 2), *mesh);
  const int k = 10;
  const auto spec = solve_lowest(forms, k + 1, mesh);

  const auto fx = functional_check(spec, {TestFamily::Coordinate, 1, 2}, k, *mesh);
  const auto fl = functional_check(spec, {TestFamily::LogHeight, 1, 2}, k, *mesh);
  CHECK(fx.satisfied);
  CHECK(fl.satisfied);

  double rhs_weighted = 0.0;
  for (int i = 0; i < k; ++i) {
    const double gap = spec.eigenvalues[k] - spec.eigenvalues[i];
    rhs_weighted += gap * (spec.eigenvalues[i] - 0.25);
  }
  rhs_weighted *= profile.rho_ratio * 4.0;
  const double lhs_combined = 2.0 * (fx.lhs + fl.lhs);
  CHECK(lhs_combined <= rhs_weighted * (1.0 + kFunctionalTolDefault));

  // The log-height A-integrals are exactly the unit normalization, so that
  // functional lhs coincides with the bare quadratic sum.
  double sum_gap_sq = 0.0;
  for (int i = 0; i < k; ++i) {
    const double gap = spec.eigenvalues[k] - spec.eigenvalues[i];
    sum_gap_sq += gap * gap;
  }
  CHECK(fl.lhs == doctest::Approx(sum_gap_sq).epsilon(1e-12));
}
