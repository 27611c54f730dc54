#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tfem/analysis.hpp"
#include "tfem/mesh_io.hpp"

#ifdef TFEM_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using namespace tfem;

int cmd_run(const std::string& experiment, int degree, int levels, int data_degree,
            int quad_degree, double tol, bool exact_coefficient,
            const std::string& refinement, int jobs, const std::string& format,
            const std::string& out) {
  RunConfig cfg;
  cfg.experiment = experiment;
  cfg.degree = degree;
  cfg.levels = levels;
  cfg.data_degree = data_degree;
  cfg.quad_degree = quad_degree;
  cfg.tol = tol;
  cfg.exact_coefficient = exact_coefficient;
  cfg.refinement = refinement;
  if (jobs != 1) {
    cfg.policy = ExecPolicy::OpenMP;
#ifdef TFEM_HAVE_OPENMP
    if (jobs > 1) omp_set_num_threads(jobs);
#endif
  }
  const ConvergenceReport report = run_experiment(cfg);

  std::ostringstream ss;
  if (format == "csv")
    write_csv(ss, report);
  else
    write_markdown(ss, report);
  if (out.empty()) {
    std::cout << ss.str();
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot open output file: " + out);
    f << ss.str();
  }
  return 0;
}

int cmd_bh_ratio(const std::string& geometry, int degree, int levels) {
  const Experiment exp = make_experiment(geometry);
  const auto rows = estimate_broken_bh_constant(geometry, degree, levels, exp.exact);
  std::cout << "| L | conforming | broken | ratio |\n|---|---|---|---|\n";
  double max_ratio = 0;
  for (const auto& r : rows) {
    std::cout << "| " << r.level << " | ";
    std::cout.precision(5);
    std::cout << r.ratio.conforming_error << " | " << r.ratio.broken_error << " | ";
    if (r.ratio.both_zero)
      std::cout << "--";
    else
      std::cout << r.ratio.ratio;
    std::cout << " |\n";
    if (!r.ratio.both_zero) max_ratio = std::max(max_ratio, r.ratio.ratio);
  }
  std::cout << "max ratio: " << max_ratio << "\n";
  return 0;
}

int cmd_mesh(const std::string& geometry, const std::string& in, int refine,
             const std::string& scheme, const std::string& out) {
  SimplicialComplex mesh;
  if (!in.empty())
    mesh = read_mesh_file(in);
  else
    mesh = make_experiment(geometry).mesh;
  for (int i = 0; i < refine; ++i)
    mesh = (scheme == "red") ? refine_uniform(mesh) : refine_bisection(mesh);
  std::cout << "cells: " << mesh.num_cells() << "  vertices: " << mesh.vertices.size()
            << "  h: " << mesh_size(mesh) << "  shape: " << shape_measure(mesh)
            << "  face-connected: " << (is_face_connected(mesh) ? "yes" : "no") << "\n";
  if (!out.empty()) write_mesh_file(out, mesh);
  return 0;
}

int cmd_verify(int degree, int levels) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  for (const std::string name : {"anulus", "ball-quadrant"}) {
    const Experiment exp = make_experiment(name);
    SimplicialComplex mesh = exp.mesh;
    for (int i = 0; i < levels; ++i) mesh = refine_uniform(mesh);

    // pullback identity: the pulled-back exact solution solves the pulled-back
    // problem; checked weakly via the FE solution converging to it (run one
    // level and require a finite, small error)
    const auto space = build_space(mesh, degree);
    const InterpolatedData data = interpolate_data(exp.problem, space, degree);
    const CSRMatrix k = assemble_stiffness(space, CoefficientInput{&data},
                                           2 * degree + 2);
    const Vec b = assemble_load(space, LoadInput{&data}, 2 * degree + 2);
    Vec solution = Vec::Zero(space.num_dofs);
    if (space.num_free() > 0) {
      const auto sys = apply_dirichlet(k, b, space);
      SolveReport sr;
      const int max_iter =
          static_cast<int>(50 * std::sqrt(static_cast<double>(sys.matrix.n))) + 1000;
      solution =
          sys.expand(cg_solve(sys.matrix, sys.rhs, 1e-12, max_iter,
                              Preconditioner::Jacobi, sr));
    }
    const ErrorNorms err = error_norms(space, solution, exp.exact, 2 * degree + 6);
    check(name + ": finite discretization error",
          std::isfinite(err.l2) && std::isfinite(err.h1semi));

    // symmetry of the pulled-back coefficient at quadrature points
    bool sym = true;
    for (int ci = 0; ci < mesh.num_cells() && sym; ++ci) {
      const SimplexGeom geom(mesh.simplex_vertices(mesh.cell(ci)));
      const auto& rule = quadrature(2, 4);
      for (int q = 0; q < rule.weights.size(); ++q) {
        const Mat a = exp.problem.coefficient.value(geom.point(rule.points.col(q)),
                                                    mesh.region_tags[ci]);
        if ((a - a.transpose()).norm() > 1e-12 * a.norm()) sym = false;
        Eigen::SelfAdjointEigenSolver<Mat> es(a);
        if (es.eigenvalues().minCoeff() <= 0) sym = false;
      }
    }
    check(name + ": coefficient symmetric positive definite", sym);

    check(name + ": mesh face-connected", is_face_connected(mesh));

    // interpolant reproduces FE functions
    const auto assignment = build_dof_assignment(space);
    Vec probe = Vec::Zero(space.num_dofs);
    for (int i = 0; i < space.num_dofs; ++i)
      probe[i] = std::sin(0.7 * i + 0.3);
    ScalarField as_field;
    auto sp = &space;
    auto pr = probe;
    as_field.value = [sp, pr](const Vec& x, int) {
      // locate the containing cell by barycentric test
      const auto& c = *sp->mesh;
      for (int ci = 0; ci < c.num_cells(); ++ci) {
        const SimplexGeom geom(c.simplex_vertices(c.cell(ci)));
        const Vec lam = geom.barycentric(x);
        if (lam.minCoeff() >= -1e-10) {
          const Vec vals = BarycentricBasis::get(c.dim, sp->degree).values(lam);
          double s = 0;
          for (size_t i = 0; i < sp->cell_dofs[ci].size(); ++i)
            s += vals[i] * pr[sp->cell_dofs[ci][i]];
          return s;
        }
      }
      throw PointOutsideSimplex("probe point outside mesh");
    };
    const Vec back = scott_zhang_interpolate(space, assignment, as_field, 2 * degree + 4);
    double max_dev = 0;
    for (int i = 0; i < space.num_dofs; ++i)
      if (!space.dirichlet[i]) max_dev = std::max(max_dev, std::abs(back[i] - probe[i]));
    check(name + ": interpolant reproduces finite element functions", max_dev < 1e-8);
  }
  if (failures > 0) {
    std::cout << failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite elements on parametric polyhedral domains"};
  app.require_subcommand(1);

  std::string experiment = "anulus";
  int degree = 1, levels = 6, data_degree = -1, quad_degree = -1, jobs = 1;
  double tol = 1e-12;
  bool exact_coefficient = false;
  std::string format = "md", out;

  auto* run = app.add_subcommand("run", "Run a convergence experiment");
  run->add_option("--experiment", experiment,
                  "Geometry: anulus or ball-quadrant")->capture_default_str();
  run->add_option("--degree", degree, "Lagrange degree r")
      ->check(CLI::Range(1, 4))->capture_default_str();
  run->add_option("--levels", levels, "Finest refinement level")
      ->check(CLI::Range(0, 7))->capture_default_str();
  run->add_option("--data-degree", data_degree,
                  "Coefficient/load interpolation degree (-1: equal to r)")
      ->capture_default_str();
  run->add_option("--quad-degree", quad_degree,
                  "Assembly quadrature exactness (-1: 2r+2)")->capture_default_str();
  run->add_option("--tol", tol, "CG relative tolerance")->capture_default_str();
  run->add_flag("--exact-coefficient", exact_coefficient,
                "Assemble with the exact pulled-back data instead of interpolants");
  std::string refinement = "bisection";
  run->add_option("--refinement", refinement,
                  "Uniform refinement scheme: bisection (reference hierarchy) or red")
      ->check(CLI::IsMember({"bisection", "red"}))->capture_default_str();
  run->add_option("--jobs", jobs, "Worker threads (>1 enables parallel kernels)")
      ->capture_default_str();
  run->add_option("--format", format, "Output format: md or csv")
      ->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  run->add_option("--out", out, "Output file (default: stdout)");

  std::string geometry = "anulus", mesh_in, mesh_out;
  int refine = 0;
  int bh_degree = 1, bh_levels = 4;

  auto* bh = app.add_subcommand("bh-ratio",
                                "Broken-vs-conforming interpolation error ratios");
  bh->add_option("--geometry", geometry, "anulus or ball-quadrant")
      ->capture_default_str();
  bh->add_option("--degree", bh_degree, "Lagrange degree r")
      ->check(CLI::Range(1, 4))->capture_default_str();
  bh->add_option("--levels", bh_levels, "Finest refinement level")
      ->check(CLI::Range(0, 7))->capture_default_str();

  auto* mesh = app.add_subcommand("mesh", "Emit, refine, or validate a mesh file");
  mesh->add_option("--geometry", geometry, "Built-in geometry")->capture_default_str();
  mesh->add_option("--in", mesh_in, "Read mesh from file instead of a built-in");
  mesh->add_option("--refine", refine, "Uniform refinement steps")
      ->check(CLI::Range(0, 10))->capture_default_str();
  std::string scheme = "red";
  mesh->add_option("--scheme", scheme, "Refinement scheme: red or bisection")
      ->check(CLI::IsMember({"red", "bisection"}))->capture_default_str();
  mesh->add_option("--out", mesh_out, "Write the resulting mesh to this file");

  int verify_degree = 2, verify_levels = 2;
  auto* verify = app.add_subcommand("verify", "Run the internal property checks");
  verify->add_option("--degree", verify_degree, "Lagrange degree r")
      ->check(CLI::Range(1, 4))->capture_default_str();
  verify->add_option("--levels", verify_levels, "Refinement level to test at")
      ->check(CLI::Range(0, 5))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return cmd_run(experiment, degree, levels, data_degree, quad_degree, tol,
                     exact_coefficient, refinement, jobs, format, out);
    if (bh->parsed()) return cmd_bh_ratio(geometry, bh_degree, bh_levels);
    if (mesh->parsed()) return cmd_mesh(geometry, mesh_in, refine, scheme, mesh_out);
    if (verify->parsed()) return cmd_verify(verify_degree, verify_levels);
  } catch (const tfem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
