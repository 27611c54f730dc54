// Benchmarks the serial kernels against the OpenMP ones: stiffness assembly
// and repeated sparse matrix-vector products on a refined built-in geometry.

#include <chrono>
#include <iostream>

#include "tfem/analysis.hpp"

using namespace tfem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int degree = 2;
  int levels = 6;
  if (argc > 1) degree = std::atoi(argv[1]);
  if (argc > 2) levels = std::atoi(argv[2]);

  Experiment exp = make_experiment("anulus");
  SimplicialComplex mesh = exp.mesh;
  for (int i = 0; i < levels; ++i) mesh = refine_uniform(mesh);
  const auto space = build_space(mesh, degree);
  std::cout << "anulus level " << levels << ", degree " << degree << ": "
            << mesh.num_cells() << " cells, " << space.num_dofs << " dofs\n";

  const InterpolatedData data = interpolate_data(exp.problem, space, degree);
  const CoefficientInput coeff{&data};
  const int quad = 2 * degree + 2;

  auto t0 = std::chrono::steady_clock::now();
  const CSRMatrix k_serial = assemble_stiffness(space, coeff, quad, ExecPolicy::Serial);
  const double ts = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const CSRMatrix k_par = assemble_stiffness(space, coeff, quad, ExecPolicy::OpenMP);
  const double tp = seconds_since(t0);

  double dev = 0;
  for (size_t i = 0; i < k_serial.vals.size(); ++i)
    dev = std::max(dev, std::abs(k_serial.vals[i] - k_par.vals[i]));
  std::cout << "assembly   serial " << ts << " s, parallel " << tp << " s, speedup "
            << ts / tp << ", max deviation " << dev << "\n";

  Vec x = Vec::LinSpaced(space.num_dofs, 0.0, 1.0);
  const int reps = 200;
  t0 = std::chrono::steady_clock::now();
  Vec ys = Vec::Zero(space.num_dofs);
  for (int i = 0; i < reps; ++i) ys += k_serial.multiply(x, ExecPolicy::Serial);
  const double ms = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  Vec yp = Vec::Zero(space.num_dofs);
  for (int i = 0; i < reps; ++i) yp += k_serial.multiply(x, ExecPolicy::OpenMP);
  const double mp = seconds_since(t0);
  std::cout << "matvec x" << reps << " serial " << ms << " s, parallel " << mp
            << " s, speedup " << ms / mp << ", max deviation "
            << (ys - yp).cwiseAbs().maxCoeff() << "\n";
  return 0;
}
