#include "tfem/solver.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace tfem {

Vec cg_solve(const CSRMatrix& k, const Vec& b, double tol_rel, int max_iter,
             Preconditioner precond, SolveReport& report, ExecPolicy policy,
             const Vec* initial, const std::function<void(int, const Vec&)>& on_iterate) {
  const auto start = std::chrono::steady_clock::now();
  const int n = k.n;
  report.method = (precond == Preconditioner::Jacobi) ? "cg+jacobi" : "cg";

  Vec inv_diag;
  if (precond == Preconditioner::Jacobi) {
    inv_diag = k.diagonal();
    for (int i = 0; i < n; ++i) {
      if (inv_diag[i] <= 0) throw NotPositiveDefinite("non-positive diagonal entry");
      inv_diag[i] = 1.0 / inv_diag[i];
    }
  }
  auto apply_precond = [&](const Vec& r) {
    return (precond == Preconditioner::Jacobi) ? Vec(inv_diag.cwiseProduct(r)) : r;
  };

  const double bnorm = b.norm();
  Vec x = initial ? *initial : Vec(Vec::Zero(n));
  if (bnorm == 0) {
    report.iterations = 0;
    report.relative_residual = 0;
    return Vec(Vec::Zero(n));
  }

  Vec r = b - k.multiply(x, policy);
  Vec z = apply_precond(r);
  Vec p = z;
  double rz = r.dot(z);

  int it = 0;
  while (it < max_iter) {
    if (r.norm() <= tol_rel * bnorm) {
      // recompute the residual from scratch before accepting
      r = b - k.multiply(x, policy);
      if (r.norm() <= tol_rel * bnorm) break;
      z = apply_precond(r);
      p = z;
      rz = r.dot(z);
    }
    ++it;
    const Vec q = k.multiply(p, policy);
    const double pq = p.dot(q);
    if (pq <= 0) throw NotPositiveDefinite("CG encountered p^T K p <= 0");
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    z = apply_precond(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    if (on_iterate) on_iterate(it, x);
  }

  const Vec true_res = b - k.multiply(x, policy);
  report.relative_residual = true_res.norm() / bnorm;
  report.iterations = it;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report.relative_residual > tol_rel)
    throw MaxIterations("CG did not reach the requested tolerance");
  return x;
}

Vec dense_solve(const CSRMatrix& k, const Vec& b) {
  if (k.n > 5000) throw Error("dense_solve limited to N <= 5000");
  const Mat dense = k.dense();
  const Eigen::LLT<Mat> llt(dense);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("dense Cholesky factorization failed");
  return llt.solve(b);
}

}  // namespace tfem
