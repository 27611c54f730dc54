#pragma once

#include <vector>

#include "tfem/mesh.hpp"

namespace tfem {

/// Degree-r Lagrange lattice on the reference d-simplex: the multi-indices
/// alpha with |alpha| = r; barycentric coordinates are alpha / r.
struct LagrangePointSet {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<int>> alpha;  // each of size dim+1
  std::vector<bool> interior;           // alpha has no zero entry
  Mat barycentric;                      // (dim+1) x count

  int count() const { return static_cast<int>(alpha.size()); }
};

LagrangePointSet lagrange_lattice(int d, int r);

/// Physical coordinates of the Lagrange points of a simplex, n x count.
Mat lagrange_points(const SimplicialComplex& c, const Simplex& s, int r);

/// Nodal basis in barycentric-monomial form, shared by all simplices of a
/// given intrinsic dimension and degree.
struct BarycentricBasis {
  int d = 0, r = 0;
  std::vector<std::vector<int>> mono;  // monomial multi-indices, |beta| = r
  Mat coeff;                           // (#mono x #basis), basis_j = sum_m coeff(m,j) lambda^beta_m

  Vec values(const Vec& lambda) const;
  /// Partial derivatives w.r.t. each barycentric coordinate, (#basis x (d+1)).
  Mat lambda_derivs(const Vec& lambda) const;

  static const BarycentricBasis& get(int d, int r);
};

/// Affine geometry of a (possibly embedded) simplex.
struct SimplexGeom {
  Mat verts;  // n x (d+1)
  int d = 0, n = 0;

  explicit SimplexGeom(Mat v);

  double volume() const { return volume_; }
  double diameter() const;
  /// Integral scale: physical measure / reference measure = d! * volume.
  double measure_factor() const { return measure_; }
  /// Gradients of the barycentric coordinates, (d+1) x n. Full-dimensional only.
  const Mat& grad_lambda() const;
  Vec barycentric(const Vec& x) const;
  Vec point(const Vec& lambda) const { return verts * lambda; }

 private:
  double volume_ = 0, measure_ = 0;
  Mat grad_lambda_;
};

struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  Mat points;   // (dim+1) x npoints, barycentric
  Vec weights;  // sum equals reference volume 1/dim!
};

/// Rule exact for all polynomials of total degree <= q on the reference
/// d-simplex. All weights positive.
const QuadratureRule& quadrature(int d, int q);

struct BasisEval {
  Mat values;                   // npts x nbasis
  std::vector<Mat> gradients;   // per point: nbasis x n
};

BasisEval eval_basis(const SimplicialComplex& c, const Simplex& s, int r,
                     const std::vector<Vec>& pts);

Mat local_mass_matrix(const SimplexGeom& g, int r);

/// Reference-element basis values and barycentric derivatives at the points of
/// quadrature(d, qdeg), cached per (d, r, qdeg). Cell independent; physical
/// gradients follow by contracting with the cell's grad_lambda.
struct BasisTables {
  Mat values;                       // nq x nbasis
  std::vector<Mat> lambda_derivs;   // per point: nbasis x (d+1)
};
const BasisTables& basis_tables(int d, int r, int qdeg);

/// Coefficients of the biorthogonal dual basis in the Lagrange basis; column x
/// holds the expansion of Psi_x. Equals the inverse local mass matrix.
Mat dual_basis(const SimplexGeom& g, int r);

}  // namespace tfem
