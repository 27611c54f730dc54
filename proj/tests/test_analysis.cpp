#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tfem/analysis.hpp"

using namespace tfem;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

SimplicialComplex unit_square() {
  return build_complex({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)},
                       {{0, 1, 2}, {1, 3, 2}},
                       {{0, 1}, {1, 3}, {2, 3}, {0, 2}}, {0, 0});
}

}  // namespace

TEST_CASE("dyadic convergence rates") {
  const auto rates = convergence_rate({1.0, 0.5, 0.25});
  REQUIRE(rates.size() == 2);
  CHECK(rates[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rates[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(convergence_rate({1.0, 0.0}), NonPositiveError);
  CHECK_THROWS_AS(convergence_rate({-1.0, 0.5}), NonPositiveError);
}

TEST_CASE("error norms against hand-computable fields") {
  const auto c = unit_square();
  const auto space = build_space(c, 1);

  // zero FE function vs the constant 1: L2 norm 1, gradient error 0
  ScalarField one;
  one.value = [](const Vec&, int) { return 1.0; };
  one.gradient = [](const Vec&, int) { return Vec(Vec::Zero(2)); };
  const auto n1 = error_norms(space, Vec::Zero(space.num_dofs), one, 6);
  CHECK(n1.l2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(n1.h1semi < 1e-13);

  // nodal interpolant of a linear function reproduces it exactly
  ScalarField lin;
  lin.value = [](const Vec& x, int) { return 1 + 2 * x[0] + 3 * x[1]; };
  lin.gradient = [](const Vec&, int) { return Vec(v2(2, 3)); };
  Vec coeffs(space.num_dofs);
  for (int i = 0; i < space.num_dofs; ++i)
    coeffs[i] = lin.value(space.dof_points[i], -1);
  const auto n2 = error_norms(space, coeffs, lin, 6);
  CHECK(n2.l2 < 1e-13);
  CHECK(n2.h1semi < 1e-13);

  // with the identity coefficient the energy error is the H1-seminorm error
  TensorField id;
  id.value = [](const Vec&, int) { return Mat(Mat::Identity(2, 2)); };
  const double e = energy_error(space, Vec::Zero(space.num_dofs), one, id, 6);
  CHECK(e == doctest::Approx(n1.h1semi).epsilon(1e-12));

  // parallel evaluation matches serial bitwise
  const auto np = error_norms(space, coeffs, lin, 6, ExecPolicy::OpenMP);
  CHECK(np.l2 == n2.l2);
  CHECK(np.h1semi == n2.h1semi);
}

TEST_CASE("level-0 experiment rows reduce to norms of the exact solution") {
  RunConfig cfg;
  cfg.experiment = "anulus";
  cfg.degree = 1;
  cfg.levels = 0;
  const auto report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 1);
  const auto& row = report.rows[0];
  CHECK(row.h == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(row.dofs == 8);
  CHECK(row.cg_iters == 0);  // every dof constrained, zero solution
  CHECK(row.err_h1semi == doctest::Approx(0.250982).epsilon(1e-4));
  CHECK(row.err_l2 == doctest::Approx(0.0282125).epsilon(1e-4));
  CHECK(std::isnan(row.rate_h1));
  CHECK(std::isnan(row.rate_l2));
}

TEST_CASE("short experiment converges and reports rates") {
  RunConfig cfg;
  cfg.experiment = "ball-quadrant";
  cfg.degree = 1;
  cfg.levels = 2;
  const auto report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].cg_iters == 0);
  CHECK(report.rows[2].cg_iters > 0);
  CHECK(report.rows[2].err_h1semi < report.rows[1].err_h1semi);
  CHECK(report.rows[2].err_l2 < report.rows[1].err_l2);
  CHECK(std::isfinite(report.rows[1].rate_h1));
  CHECK(std::isfinite(report.rows[2].rate_l2));

  std::ostringstream csv;
  write_csv(csv, report);
  const std::string s = csv.str();
  CHECK(s.find("level,h,dofs,err_h1semi,rate_h1,err_l2,rate_l2,cg_iters\n") == 0);
  // the first data row has empty rate fields
  const auto line1 = s.substr(s.find('\n') + 1, s.find('\n', s.find('\n') + 1) - s.find('\n') - 1);
  CHECK(line1.find(",,") != std::string::npos);

  std::ostringstream md;
  write_markdown(md, report);
  CHECK(md.str().find("| -- |") != std::string::npos);
  CHECK(md.str().find("ball-quadrant") != std::string::npos);
}

TEST_CASE("experiment configuration is validated") {
  RunConfig cfg;
  cfg.degree = 5;
  CHECK_THROWS_AS(run_experiment(cfg), InvalidDegree);
  cfg.degree = 1;
  cfg.refinement = "green";
  CHECK_THROWS_AS(run_experiment(cfg), Error);
  cfg.refinement = "red";
  cfg.levels = 9;
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("red and bisection hierarchies both converge") {
  for (const char* scheme : {"red", "bisection"}) {
    RunConfig cfg;
    cfg.experiment = "anulus";
    cfg.degree = 2;
    cfg.levels = 3;
    cfg.refinement = scheme;
    const auto report = run_experiment(cfg);
    const auto& last = report.rows.back();
    CHECK(last.rate_h1 > 1.2);
    CHECK(last.err_l2 < report.rows[report.rows.size() - 2].err_l2);
  }
}

TEST_CASE("broken-vs-conforming ratios stay bounded for the exact solution") {
  const auto exp = make_experiment("anulus");
  const auto rows = estimate_broken_bh_constant("anulus", 1, 2, exp.exact);
  REQUIRE(rows.size() == 3);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& r : rows) {
    CHECK_FALSE(r.ratio.both_zero);
    CHECK(std::isfinite(r.ratio.ratio));
    lo = std::min(lo, r.ratio.ratio);
    hi = std::max(hi, r.ratio.ratio);
  }
  CHECK(hi / lo < 3.0);
}
