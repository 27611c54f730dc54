#pragma once

#include <functional>
#include <string>

#include "tfem/assembly.hpp"

namespace tfem {

enum class Preconditioner { None, Jacobi };

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0;  // true residual, recomputed from scratch
  double seconds = 0;
  std::string method;
};

/// Conjugate gradients for an SPD system. Deterministic for a fixed system;
/// the OpenMP policy parallelizes the matrix-vector products only.
Vec cg_solve(const CSRMatrix& k, const Vec& b, double tol_rel, int max_iter,
             Preconditioner precond, SolveReport& report,
             ExecPolicy policy = ExecPolicy::Serial, const Vec* initial = nullptr,
             const std::function<void(int, const Vec&)>& on_iterate = nullptr);

/// Dense Cholesky solve; oracle for CG on systems of moderate size.
Vec dense_solve(const CSRMatrix& k, const Vec& b);

}  // namespace tfem
