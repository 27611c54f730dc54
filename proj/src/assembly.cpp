#include "tfem/assembly.hpp"

#include <cmath>
#include <map>
#include <ostream>

#ifdef TFEM_HAVE_OPENMP
#include <omp.h>
#endif

namespace tfem {

namespace {

int sym_index(int i, int j, int n) {
  // upper-triangle storage (i <= j)
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

CSRMatrix freeze(int n, const std::vector<std::map<int, double>>& rows) {
  CSRMatrix m;
  m.n = n;
  m.row_ptr.resize(n + 1, 0);
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<int>(rows[i].size());
  m.cols.reserve(m.row_ptr[n]);
  m.vals.reserve(m.row_ptr[n]);
  for (int i = 0; i < n; ++i) {
    for (const auto& [c, v] : rows[i]) {
      m.cols.push_back(c);
      m.vals.push_back(v);
    }
  }
  return m;
}

// Evaluate the coefficient matrix at quadrature point q of a cell.
struct CoefficientEval {
  const GlobalLagrangeSpace& space;
  const CoefficientInput& input;
  int quad_degree;

  Mat at(int cell, int q, const Vec& pt) const {
    const auto& c = *space.mesh;
    const int n = c.dim;
    if (std::holds_alternative<TensorField>(input))
      return std::get<TensorField>(input).value(pt, c.region_tags[cell]);
    const auto* data = std::get<const InterpolatedData*>(input);
    const auto& tables = basis_tables(n, data->degree, quad_degree);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v =
            tables.values.row(q).dot(data->a_coeffs[cell][sym_index(i, j, n)]);
        a(i, j) = v;
        a(j, i) = v;
      }
    return a;
  }
};

bool positive_definite(const Mat& a) {
  if (a.rows() == 2) return a(0, 0) > 0 && a.determinant() > 0;
  return Eigen::LLT<Mat>(a).info() == Eigen::Success;
}

}  // namespace

Vec CSRMatrix::multiply(const Vec& x, ExecPolicy policy) const {
  Vec y(n);
#ifdef TFEM_HAVE_OPENMP
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += vals[k] * x[cols[k]];
      y[i] = acc;
    }
    return y;
  }
#else
  (void)policy;
#endif
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[i] = acc;
  }
  return y;
}

Vec CSRMatrix::diagonal() const {
  Vec d = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (cols[k] == i) d[i] = vals[k];
  return d;
}

double CSRMatrix::max_abs() const {
  double m = 0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

Mat CSRMatrix::dense() const {
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) m(i, cols[k]) = vals[k];
  return m;
}

InterpolatedData interpolate_data(const ParametricProblem& problem,
                                  const GlobalLagrangeSpace& space, int k) {
  if (k < 1) throw InvalidDegree("data interpolation degree must be >= 1");
  const auto& c = *space.mesh;
  const int n = c.dim;
  const auto lat = lagrange_lattice(n, k);
  const int np = lat.count();
  const int nsym = n * (n + 1) / 2;

  InterpolatedData data;
  data.degree = k;
  data.a_coeffs.resize(c.num_cells());
  data.f_coeffs.resize(c.num_cells());
  data.g_coeffs.resize(c.num_cells());

  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const Mat pts = c.simplex_vertices(c.cell(ci)) * lat.barycentric;
    const int region = c.region_tags[ci];
    data.a_coeffs[ci].assign(nsym, Vec(np));
    data.f_coeffs[ci].resize(np);
    data.g_coeffs[ci].assign(n, Vec(np));
    for (int p = 0; p < np; ++p) {
      const Vec pt = pts.col(p);
      const Mat a = problem.coefficient.value(pt, region);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) data.a_coeffs[ci][sym_index(i, j, n)][p] = a(i, j);
      data.f_coeffs[ci][p] = problem.f.value(pt, region);
      const Vec g = problem.g.value(pt, region);
      for (int i = 0; i < n; ++i) data.g_coeffs[ci][i][p] = g[i];
    }
  }
  return data;
}

CSRMatrix assemble_stiffness(const GlobalLagrangeSpace& space,
                             const CoefficientInput& coefficient, int quad_degree,
                             ExecPolicy policy, int* nonpositive_points) {
  const auto& c = *space.mesh;
  const int n = c.dim;
  const int r = space.degree;
  const auto& rule = quadrature(n, quad_degree);
  const auto& tables = basis_tables(n, r, quad_degree);
  const int nb = static_cast<int>(tables.values.cols());
  const int nq = static_cast<int>(rule.weights.size());
  const CoefficientEval coeff{space, coefficient, quad_degree};

  std::vector<Mat> local(c.num_cells());
  std::vector<int> bad(c.num_cells(), 0);

  auto compute_cell = [&](int ci) {
    const SimplexGeom geom(c.simplex_vertices(c.cell(ci)));
    const Mat& gl = geom.grad_lambda();
    Mat k = Mat::Zero(nb, nb);
    for (int q = 0; q < nq; ++q) {
      const Vec pt = geom.point(rule.points.col(q));
      const Mat a = coeff.at(ci, q, pt);
      if (!positive_definite(a)) ++bad[ci];
      const Mat grads = tables.lambda_derivs[q] * gl;  // nb x n
      const double w = rule.weights[q] * geom.measure_factor();
      k += w * (grads * a * grads.transpose());
    }
    local[ci] = 0.5 * (k + k.transpose());
  };

#ifdef TFEM_HAVE_OPENMP
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < c.num_cells(); ++ci) compute_cell(ci);
  } else
#endif
  {
    for (int ci = 0; ci < c.num_cells(); ++ci) compute_cell(ci);
  }

  if (nonpositive_points) {
    *nonpositive_points = 0;
    for (int b : bad) *nonpositive_points += b;
  }

  // accumulation in fixed cell order keeps the result deterministic
  std::vector<std::map<int, double>> rows(space.num_dofs);
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& dofs = space.cell_dofs[ci];
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) rows[dofs[i]][dofs[j]] += local[ci](i, j);
  }
  return freeze(space.num_dofs, rows);
}

Vec assemble_load(const GlobalLagrangeSpace& space, const LoadInput& load,
                  int quad_degree, ExecPolicy policy) {
  const auto& c = *space.mesh;
  const int n = c.dim;
  const int r = space.degree;
  const auto& rule = quadrature(n, quad_degree);
  const auto& tables = basis_tables(n, r, quad_degree);
  const int nb = static_cast<int>(tables.values.cols());
  const int nq = static_cast<int>(rule.weights.size());

  const bool interp = std::holds_alternative<const InterpolatedData*>(load);
  const InterpolatedData* data = interp ? std::get<const InterpolatedData*>(load) : nullptr;

  std::vector<Vec> local(c.num_cells());
  auto compute_cell = [&](int ci) {
    const SimplexGeom geom(c.simplex_vertices(c.cell(ci)));
    const Mat& gl = geom.grad_lambda();
    const int region = c.region_tags[ci];
    Vec b = Vec::Zero(nb);
    for (int q = 0; q < nq; ++q) {
      const Vec pt = geom.point(rule.points.col(q));
      const double w = rule.weights[q] * geom.measure_factor();
      double fval;
      Vec gval(n);
      if (interp) {
        const auto& dtab = basis_tables(n, data->degree, quad_degree);
        fval = dtab.values.row(q).dot(data->f_coeffs[ci]);
        for (int i = 0; i < n; ++i)
          gval[i] = dtab.values.row(q).dot(data->g_coeffs[ci][i]);
      } else {
        const auto& [f, g] = std::get<std::pair<ScalarField, VectorField>>(load);
        fval = f.value(pt, region);
        gval = g.value(pt, region);
      }
      b += (w * fval) * tables.values.row(q).transpose();
      const Mat grads = tables.lambda_derivs[q] * gl;
      b += w * (grads * gval);
    }
    local[ci] = b;
  };

#ifdef TFEM_HAVE_OPENMP
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < c.num_cells(); ++ci) compute_cell(ci);
  } else
#endif
  {
    for (int ci = 0; ci < c.num_cells(); ++ci) compute_cell(ci);
  }

  Vec b = Vec::Zero(space.num_dofs);
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& dofs = space.cell_dofs[ci];
    for (int i = 0; i < nb; ++i) b[dofs[i]] += local[ci][i];
  }
  return b;
}

ReducedSystem apply_dirichlet(const CSRMatrix& k, const Vec& b,
                              const GlobalLagrangeSpace& space) {
  ReducedSystem sys;
  sys.full_size = space.num_dofs;
  std::vector<int> full_to_free(space.num_dofs, -1);
  for (int i = 0; i < space.num_dofs; ++i) {
    if (!space.dirichlet[i]) {
      full_to_free[i] = static_cast<int>(sys.free_to_full.size());
      sys.free_to_full.push_back(i);
    }
  }
  const int nf = static_cast<int>(sys.free_to_full.size());
  if (nf == 0) throw AllDofsConstrained("every degree of freedom is constrained");

  sys.matrix.n = nf;
  sys.matrix.row_ptr.resize(nf + 1, 0);
  sys.rhs.resize(nf);
  for (int fi = 0; fi < nf; ++fi) {
    const int i = sys.free_to_full[fi];
    sys.rhs[fi] = b[i];
    for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
      if (full_to_free[k.cols[p]] >= 0) {
        sys.matrix.cols.push_back(full_to_free[k.cols[p]]);
        sys.matrix.vals.push_back(k.vals[p]);
      }
    }
    sys.matrix.row_ptr[fi + 1] = static_cast<int>(sys.matrix.cols.size());
  }
  return sys;
}

Vec ReducedSystem::expand(const Vec& x_free) const {
  Vec x = Vec::Zero(full_size);
  for (size_t i = 0; i < free_to_full.size(); ++i) x[free_to_full[i]] = x_free[i];
  return x;
}

void write_matrix_market(std::ostream& os, const CSRMatrix& m) {
  int nnz_lower = 0;
  for (int i = 0; i < m.n; ++i)
    for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      if (m.cols[k] <= i) ++nnz_lower;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << m.n << " " << m.n << " " << nnz_lower << "\n";
  os.precision(17);
  for (int i = 0; i < m.n; ++i)
    for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      if (m.cols[k] <= i) os << i + 1 << " " << m.cols[k] + 1 << " " << m.vals[k] << "\n";
}

}  // namespace tfem
