#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tfem/builtin.hpp"
#include "tfem/interp.hpp"
#include "tfem/solver.hpp"

namespace tfem {

struct ErrorNorms {
  double l2 = 0;
  double h1semi = 0;
};

/// L2 and H1-seminorm errors of a FE function against an exact solution,
/// both measured on the parametric domain.
ErrorNorms error_norms(const GlobalLagrangeSpace& space, const Vec& coeffs,
                       const ScalarField& exact, int quad_degree,
                       ExecPolicy policy = ExecPolicy::Serial);

/// Coefficient-weighted H1-seminorm error (the energy norm of the error).
double energy_error(const GlobalLagrangeSpace& space, const Vec& coeffs,
                    const ScalarField& exact, const TensorField& coefficient,
                    int quad_degree);

/// Dyadic rates log2(e_{L-1} / e_L); entry i corresponds to errors[i+1].
std::vector<double> convergence_rate(const std::vector<double>& errors);

struct RunConfig {
  std::string experiment = "anulus";
  int degree = 1;
  int levels = 6;           // finest refinement level, inclusive from 0
  int data_degree = -1;     // -1: equal to degree
  int quad_degree = -1;     // -1: 2 degree + 2
  int error_quad_degree = -1;  // -1: 2 degree + 6
  double tol = 1e-12;
  bool exact_coefficient = false;  // skip data interpolation
  // "bisection" (reference-table hierarchy) or "red"
  std::string refinement = "bisection";
  ExecPolicy policy = ExecPolicy::Serial;
};

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  int dofs = 0;
  double err_h1semi = 0;
  double rate_h1 = 0;  // NaN on the first row
  double err_l2 = 0;
  double rate_l2 = 0;  // NaN on the first row
  int cg_iters = 0;
};

struct ConvergenceReport {
  RunConfig config;
  std::vector<ConvergenceRow> rows;
};

/// Full pipeline per level: refine, pull back, interpolate data, assemble,
/// eliminate Dirichlet dofs, solve, measure errors.
ConvergenceReport run_experiment(const RunConfig& config);

struct RatioRow {
  int level = 0;
  BrokenConformingRatio ratio;
};

/// Broken-vs-conforming ratio per refinement level for a test function on a
/// built-in geometry; bounded sequences are the empirical content of the
/// broken Bramble-Hilbert comparison.
std::vector<RatioRow> estimate_broken_bh_constant(const std::string& geometry, int r,
                                                  int levels, const ScalarField& v);

void write_csv(std::ostream& os, const ConvergenceReport& report);
void write_markdown(std::ostream& os, const ConvergenceReport& report);

}  // namespace tfem
