#include "tfem/elements.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

namespace tfem {

namespace {

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void enumerate_multi_indices(int d, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> alpha(d + 1, 0);
  // lexicographic enumeration of all alpha in N_0^{d+1} with |alpha| = r
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == d) {
      alpha[pos] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      alpha[pos] = k;
      rec(pos + 1, remaining - k);
    }
  };
  rec(0, r);
}

double eval_monomial(const Vec& lambda, const std::vector<int>& beta) {
  double v = 1;
  for (size_t i = 0; i < beta.size(); ++i)
    for (int k = 0; k < beta[i]; ++k) v *= lambda[i];
  return v;
}

// Gauss-Legendre nodes/weights on [0,1]
void gauss_legendre_01(int m, std::vector<double>& x, std::vector<double>& w) {
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    // initial guess on [-1,1]
    double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double p0, p1;
    for (int it = 0; it < 100; ++it) {
      p0 = 1;
      p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = m * (t * p1 - p0) / (t * t - 1);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    p0 = 1;
    p1 = t;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = m * (t * p1 - p0) / (t * t - 1);
    x[i] = 0.5 * (1 + t);
    w[i] = 1.0 / ((1 - t * t) * dp * dp);
  }
  std::sort(x.begin(), x.end());
  // weights recomputed in node order
  std::vector<double> ws(m);
  for (int i = 0; i < m; ++i) {
    const double t = 2 * x[i] - 1;
    double p0 = 1, p1 = t;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = m * (t * p1 - p0) / (t * t - 1);
    ws[i] = 1.0 / ((1 - t * t) * dp * dp);
  }
  w = ws;
}

QuadratureRule make_rule_1d(int q) {
  const int m = (q + 1) / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre_01(m, x, w);
  QuadratureRule rule;
  rule.dim = 1;
  rule.exactness = 2 * m - 1;
  rule.points.resize(2, m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.points(0, i) = 1 - x[i];
    rule.points(1, i) = x[i];
    rule.weights[i] = w[i];
  }
  return rule;
}

QuadratureRule make_rule_2d(int q) {
  QuadratureRule rule;
  rule.dim = 2;
  if (q <= 1) {
    rule.exactness = 1;
    rule.points.resize(3, 1);
    rule.points.col(0) = Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3);
    rule.weights = Vec::Constant(1, 0.5);
    return rule;
  }
  if (q == 2) {
    // edge-midpoint rule
    rule.exactness = 2;
    rule.points.resize(3, 3);
    rule.points.col(0) = Eigen::Vector3d(0.0, 0.5, 0.5);
    rule.points.col(1) = Eigen::Vector3d(0.5, 0.0, 0.5);
    rule.points.col(2) = Eigen::Vector3d(0.5, 0.5, 0.0);
    rule.weights = Vec::Constant(3, 1.0 / 6);
    return rule;
  }
  // collapsed tensor (Duffy) rule: x = xi, y = eta (1 - xi), jacobian (1 - xi)
  const int m = (q + 2 + 1) / 2;  // exact for degree q+1 in xi
  std::vector<double> x, w;
  gauss_legendre_01(m, x, w);
  rule.exactness = q;
  rule.points.resize(3, m * m);
  rule.weights.resize(m * m);
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j, ++idx) {
      const double px = x[i];
      const double py = x[j] * (1 - x[i]);
      rule.points(0, idx) = 1 - px - py;
      rule.points(1, idx) = px;
      rule.points(2, idx) = py;
      rule.weights[idx] = w[i] * w[j] * (1 - x[i]);
    }
  }
  return rule;
}

}  // namespace

LagrangePointSet lagrange_lattice(int d, int r) {
  if (r < 1) throw InvalidDegree("Lagrange degree must be >= 1");
  LagrangePointSet s;
  s.dim = d;
  s.degree = r;
  enumerate_multi_indices(d, r, s.alpha);
  const int np = s.count();
  s.interior.resize(np);
  s.barycentric.resize(d + 1, np);
  for (int i = 0; i < np; ++i) {
    bool inner = true;
    for (int k = 0; k <= d; ++k) {
      s.barycentric(k, i) = static_cast<double>(s.alpha[i][k]) / r;
      if (s.alpha[i][k] == 0) inner = false;
    }
    s.interior[i] = inner;
  }
  return s;
}

Mat lagrange_points(const SimplicialComplex& c, const Simplex& s, int r) {
  const auto lat = lagrange_lattice(s.dim(), r);
  return c.simplex_vertices(s) * lat.barycentric;
}

Vec BarycentricBasis::values(const Vec& lambda) const {
  const int nb = static_cast<int>(mono.size());
  Vec m(nb);
  for (int i = 0; i < nb; ++i) m[i] = eval_monomial(lambda, mono[i]);
  return coeff.transpose() * m;
}

Mat BarycentricBasis::lambda_derivs(const Vec& lambda) const {
  const int nb = static_cast<int>(mono.size());
  Mat dm(nb, d + 1);
  for (int i = 0; i < nb; ++i) {
    for (int k = 0; k <= d; ++k) {
      if (mono[i][k] == 0) {
        dm(i, k) = 0;
        continue;
      }
      auto beta = mono[i];
      beta[k] -= 1;
      dm(i, k) = mono[i][k] * eval_monomial(lambda, beta);
    }
  }
  return coeff.transpose() * dm;
}

const BarycentricBasis& BarycentricBasis::get(int d, int r) {
  static std::map<std::pair<int, int>, BarycentricBasis> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({d, r});
  if (it != cache.end()) return it->second;

  if (r < 1) throw InvalidDegree("Lagrange degree must be >= 1");
  BarycentricBasis b;
  b.d = d;
  b.r = r;
  enumerate_multi_indices(d, r, b.mono);
  const auto lat = lagrange_lattice(d, r);
  const int nb = lat.count();
  Mat vander(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int m = 0; m < nb; ++m)
      vander(i, m) = eval_monomial(lat.barycentric.col(i), b.mono[m]);
  b.coeff = vander.partialPivLu().inverse();
  return cache.emplace(std::make_pair(d, r), std::move(b)).first->second;
}

SimplexGeom::SimplexGeom(Mat v) : verts(std::move(v)) {
  n = static_cast<int>(verts.rows());
  d = static_cast<int>(verts.cols()) - 1;
  volume_ = simplex_volume(verts);
  measure_ = volume_ * factorial(d);
  if (d == n) {
    // lambda(x) solves [1...1; p0...pd] lambda = [1; x]
    Mat a(n + 1, n + 1);
    a.row(0).setOnes();
    a.block(1, 0, n, n + 1) = verts;
    const Mat inv = a.partialPivLu().inverse();
    grad_lambda_ = inv.block(0, 1, d + 1, n);
  }
}

double SimplexGeom::diameter() const { return simplex_diameter(verts); }

const Mat& SimplexGeom::grad_lambda() const {
  if (d != n) throw Error("grad_lambda requires a full-dimensional simplex");
  return grad_lambda_;
}

Vec SimplexGeom::barycentric(const Vec& x) const {
  if (d == n) {
    Vec rhs(n + 1);
    rhs[0] = 1;
    rhs.tail(n) = x;
    Mat a(n + 1, n + 1);
    a.row(0).setOnes();
    a.block(1, 0, n, n + 1) = verts;
    return a.partialPivLu().solve(rhs);
  }
  // embedded simplex: affine coordinates of the orthogonal projection
  Mat e(n, d);
  for (int i = 0; i < d; ++i) e.col(i) = verts.col(i + 1) - verts.col(0);
  const Vec mu = (e.transpose() * e).ldlt().solve(e.transpose() * (x - verts.col(0)));
  Vec lambda(d + 1);
  lambda[0] = 1 - mu.sum();
  lambda.tail(d) = mu;
  return lambda;
}

const QuadratureRule& quadrature(int d, int q) {
  if (d != 1 && d != 2) throw UnsupportedOrder("quadrature supports d in {1,2}");
  if (q < 0 || q > 20) throw UnsupportedOrder("quadrature degree out of range");
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({d, q});
  if (it != cache.end()) return it->second;
  QuadratureRule rule = (d == 1) ? make_rule_1d(q) : make_rule_2d(q);
  return cache.emplace(std::make_pair(d, q), std::move(rule)).first->second;
}

BasisEval eval_basis(const SimplicialComplex& c, const Simplex& s, int r,
                     const std::vector<Vec>& pts) {
  const SimplexGeom geom(c.simplex_vertices(s));
  const auto& basis = BarycentricBasis::get(s.dim(), r);
  const int nb = static_cast<int>(basis.mono.size());
  BasisEval out;
  out.values.resize(pts.size(), nb);
  out.gradients.reserve(pts.size());
  for (size_t p = 0; p < pts.size(); ++p) {
    const Vec lambda = geom.barycentric(pts[p]);
    if (lambda.minCoeff() < -1e-10 || lambda.maxCoeff() > 1 + 1e-10)
      throw PointOutsideSimplex("evaluation point outside simplex");
    out.values.row(p) = basis.values(lambda).transpose();
    out.gradients.push_back(basis.lambda_derivs(lambda) * geom.grad_lambda());
  }
  return out;
}

Mat local_mass_matrix(const SimplexGeom& g, int r) {
  const auto& rule = quadrature(g.d, 2 * r);
  const auto& basis = BarycentricBasis::get(g.d, r);
  const int nb = static_cast<int>(basis.mono.size());
  Mat m = Mat::Zero(nb, nb);
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec phi = basis.values(rule.points.col(q));
    m += (rule.weights[q] * g.measure_factor()) * (phi * phi.transpose());
  }
  return m;
}

const BasisTables& basis_tables(int d, int r, int qdeg) {
  static std::map<std::tuple<int, int, int>, BasisTables> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({d, r, qdeg});
  if (it != cache.end()) return it->second;

  const auto& rule = quadrature(d, qdeg);
  const auto& basis = BarycentricBasis::get(d, r);
  const int nq = static_cast<int>(rule.weights.size());
  BasisTables t;
  t.values.resize(nq, static_cast<int>(basis.mono.size()));
  t.lambda_derivs.reserve(nq);
  for (int q = 0; q < nq; ++q) {
    t.values.row(q) = basis.values(rule.points.col(q)).transpose();
    t.lambda_derivs.push_back(basis.lambda_derivs(rule.points.col(q)));
  }
  return cache.emplace(std::make_tuple(d, r, qdeg), std::move(t)).first->second;
}

Mat dual_basis(const SimplexGeom& g, int r) {
  const Mat m = local_mass_matrix(g, r);
  const Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success)
    throw SingularMassMatrix("local mass matrix not positive definite");
  return llt.solve(Mat::Identity(m.rows(), m.cols()));
}

}  // namespace tfem
