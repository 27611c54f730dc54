#include "tfem/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace tfem {

namespace {

struct CellErr {
  double l2 = 0, h1 = 0;
};

CellErr cell_errors(const GlobalLagrangeSpace& space, const Vec& coeffs,
                    const ScalarField& exact, int ci, int quad_degree) {
  const auto& c = *space.mesh;
  const SimplexGeom geom(c.simplex_vertices(c.cell(ci)));
  const auto& rule = quadrature(geom.d, quad_degree);
  const auto& tables = basis_tables(geom.d, space.degree, quad_degree);
  const int region = c.region_tags[ci];
  Vec local(space.cell_dofs[ci].size());
  for (size_t i = 0; i < space.cell_dofs[ci].size(); ++i)
    local[i] = coeffs[space.cell_dofs[ci][i]];

  CellErr e;
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec pt = geom.point(rule.points.col(q));
    const double w = rule.weights[q] * geom.measure_factor();
    const double diff = exact.value(pt, region) - tables.values.row(q).dot(local);
    e.l2 += w * diff * diff;
    const Mat grads = tables.lambda_derivs[q] * geom.grad_lambda();
    const Vec gdiff = exact.gradient(pt, region) - Vec(grads.transpose() * local);
    e.h1 += w * gdiff.squaredNorm();
  }
  return e;
}

}  // namespace

ErrorNorms error_norms(const GlobalLagrangeSpace& space, const Vec& coeffs,
                       const ScalarField& exact, int quad_degree, ExecPolicy policy) {
  const int nc = space.mesh->num_cells();
  std::vector<CellErr> partial(nc);
#ifdef TFEM_HAVE_OPENMP
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < nc; ++ci)
      partial[ci] = cell_errors(space, coeffs, exact, ci, quad_degree);
  } else
#endif
  {
    (void)policy;
    for (int ci = 0; ci < nc; ++ci)
      partial[ci] = cell_errors(space, coeffs, exact, ci, quad_degree);
  }
  // fixed-order reduction keeps the result independent of the thread count
  ErrorNorms n;
  for (const auto& e : partial) {
    n.l2 += e.l2;
    n.h1semi += e.h1;
  }
  n.l2 = std::sqrt(n.l2);
  n.h1semi = std::sqrt(n.h1semi);
  return n;
}

double energy_error(const GlobalLagrangeSpace& space, const Vec& coeffs,
                    const ScalarField& exact, const TensorField& coefficient,
                    int quad_degree) {
  const auto& c = *space.mesh;
  double acc = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const SimplexGeom geom(c.simplex_vertices(c.cell(ci)));
    const auto& rule = quadrature(geom.d, quad_degree);
    const auto& tables = basis_tables(geom.d, space.degree, quad_degree);
    const int region = c.region_tags[ci];
    Vec local(space.cell_dofs[ci].size());
    for (size_t i = 0; i < space.cell_dofs[ci].size(); ++i)
      local[i] = coeffs[space.cell_dofs[ci][i]];
    for (int q = 0; q < rule.weights.size(); ++q) {
      const Vec pt = geom.point(rule.points.col(q));
      const double w = rule.weights[q] * geom.measure_factor();
      const Mat grads = tables.lambda_derivs[q] * geom.grad_lambda();
      const Vec gdiff = exact.gradient(pt, region) - Vec(grads.transpose() * local);
      acc += w * gdiff.dot(coefficient.value(pt, region) * gdiff);
    }
  }
  return std::sqrt(acc);
}

std::vector<double> convergence_rate(const std::vector<double>& errors) {
  std::vector<double> rates;
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] <= 0 || errors[i] <= 0)
      throw NonPositiveError("convergence rates require positive errors");
    rates.push_back(std::log2(errors[i - 1] / errors[i]));
  }
  return rates;
}

ConvergenceReport run_experiment(const RunConfig& config) {
  RunConfig cfg = config;
  if (cfg.data_degree < 0) cfg.data_degree = cfg.degree;
  if (cfg.quad_degree < 0) cfg.quad_degree = 2 * cfg.degree + 2;
  if (cfg.error_quad_degree < 0) cfg.error_quad_degree = 2 * cfg.degree + 6;
  if (cfg.degree < 1 || cfg.degree > 4) throw InvalidDegree("degree must be in 1..4");
  if (cfg.levels < 0 || cfg.levels > 7) throw Error("levels must be in 0..7");
  if (cfg.refinement != "red" && cfg.refinement != "bisection")
    throw Error("refinement must be 'red' or 'bisection'");

  Experiment exp = make_experiment(cfg.experiment);
  ConvergenceReport report;
  report.config = cfg;

  SimplicialComplex mesh = exp.mesh;
  for (int level = 0; level <= cfg.levels; ++level) {
    if (level > 0)
      mesh = (cfg.refinement == "red") ? refine_uniform(mesh) : refine_bisection(mesh);
    const auto space = build_space(mesh, cfg.degree);

    CoefficientInput coeff_input{exp.problem.coefficient};
    LoadInput load_input{std::make_pair(exp.problem.f, exp.problem.g)};
    InterpolatedData data;
    if (!cfg.exact_coefficient) {
      data = interpolate_data(exp.problem, space, cfg.data_degree);
      coeff_input = CoefficientInput{&data};
      load_input = LoadInput{&data};
    }
    const CSRMatrix k = assemble_stiffness(space, coeff_input, cfg.quad_degree, cfg.policy);
    const Vec b = assemble_load(space, load_input, cfg.quad_degree, cfg.policy);

    Vec solution = Vec::Zero(space.num_dofs);
    int iters = 0;
    if (space.num_free() > 0) {
      const auto sys = apply_dirichlet(k, b, space);
      SolveReport sr;
      const int max_iter =
          static_cast<int>(50 * std::sqrt(static_cast<double>(sys.matrix.n))) + 1000;
      const Vec x = cg_solve(sys.matrix, sys.rhs, cfg.tol, max_iter,
                             Preconditioner::Jacobi, sr, cfg.policy);
      solution = sys.expand(x);
      iters = sr.iterations;
    }

    const ErrorNorms err =
        error_norms(space, solution, exp.exact, cfg.error_quad_degree, cfg.policy);
    ConvergenceRow row;
    row.level = level;
    row.h = mesh_size(mesh);
    row.dofs = space.num_dofs;
    row.err_h1semi = err.h1semi;
    row.err_l2 = err.l2;
    row.cg_iters = iters;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (report.rows.empty()) {
      row.rate_h1 = nan;
      row.rate_l2 = nan;
    } else {
      row.rate_h1 = std::log2(report.rows.back().err_h1semi / err.h1semi);
      row.rate_l2 = std::log2(report.rows.back().err_l2 / err.l2);
    }
    report.rows.push_back(row);
  }
  return report;
}

std::vector<RatioRow> estimate_broken_bh_constant(const std::string& geometry, int r,
                                                  int levels, const ScalarField& v) {
  Experiment exp = make_experiment(geometry);
  std::vector<RatioRow> rows;
  SimplicialComplex mesh = exp.mesh;
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    const auto space = build_space(mesh, r);
    RatioRow row;
    row.level = level;
    row.ratio = broken_conforming_ratio(space, v, 2 * r + 4);
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "level,h,dofs,err_h1semi,rate_h1,err_l2,rate_l2,cg_iters\n";
  os << std::setprecision(17);
  for (const auto& r : report.rows) {
    os << r.level << "," << r.h << "," << r.dofs << "," << r.err_h1semi << ",";
    if (std::isnan(r.rate_h1))
      os << "";
    else
      os << r.rate_h1;
    os << "," << r.err_l2 << ",";
    if (std::isnan(r.rate_l2))
      os << "";
    else
      os << r.rate_l2;
    os << "," << r.cg_iters << "\n";
  }
}

namespace {

std::string sig5(double v) {
  std::ostringstream ss;
  ss << std::setprecision(5) << v;
  return ss.str();
}

std::string rate2(double v) {
  if (std::isnan(v)) return "--";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

}  // namespace

void write_markdown(std::ostream& os, const ConvergenceReport& report) {
  os << "### " << report.config.experiment << ", degree r = " << report.config.degree
     << "\n\n";
  os << "#### H1 seminorm of error\n\n";
  os << "| L | h | DOFs | \\|e\\|_H1 | rate |\n|---|---|---|---|---|\n";
  for (const auto& r : report.rows)
    os << "| " << r.level << " | " << sig5(r.h) << " | " << r.dofs << " | "
       << sig5(r.err_h1semi) << " | " << rate2(r.rate_h1) << " |\n";
  os << "\n#### L2 norm of error\n\n";
  os << "| L | h | DOFs | \\|e\\|_L2 | rate |\n|---|---|---|---|---|\n";
  for (const auto& r : report.rows)
    os << "| " << r.level << " | " << sig5(r.h) << " | " << r.dofs << " | "
       << sig5(r.err_l2) << " | " << rate2(r.rate_l2) << " |\n";
}

}  // namespace tfem
