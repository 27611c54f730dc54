#pragma once

#include <iosfwd>
#include <optional>
#include <variant>

#include "tfem/geometry.hpp"
#include "tfem/interp.hpp"

namespace tfem {

enum class ExecPolicy { Serial, OpenMP };

/// Compressed-row sparse matrix; rows sorted by column id. Assembly order is
/// fixed, so the stored layout is deterministic.
struct CSRMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  Vec multiply(const Vec& x, ExecPolicy policy = ExecPolicy::Serial) const;
  Vec diagonal() const;
  double max_abs() const;
  Mat dense() const;
};

/// Per-cell nodal Lagrange interpolants of degree k for the coefficient
/// entries (upper triangle), the scalar load, and the vector load.
struct InterpolatedData {
  int degree = 0;
  std::vector<std::vector<Vec>> a_coeffs;  // per cell: n(n+1)/2 entry vectors
  std::vector<Vec> f_coeffs;               // per cell
  std::vector<std::vector<Vec>> g_coeffs;  // per cell: n component vectors
};

InterpolatedData interpolate_data(const ParametricProblem& problem,
                                  const GlobalLagrangeSpace& space, int k);

/// Either the exact coefficient or its piecewise interpolant.
using CoefficientInput = std::variant<TensorField, const InterpolatedData*>;
using LoadInput = std::variant<std::pair<ScalarField, VectorField>, const InterpolatedData*>;

CSRMatrix assemble_stiffness(const GlobalLagrangeSpace& space,
                             const CoefficientInput& coefficient, int quad_degree,
                             ExecPolicy policy = ExecPolicy::Serial,
                             int* nonpositive_points = nullptr);

Vec assemble_load(const GlobalLagrangeSpace& space, const LoadInput& load,
                  int quad_degree, ExecPolicy policy = ExecPolicy::Serial);

/// Reduced SPD system over the free (non-Dirichlet) degrees of freedom.
struct ReducedSystem {
  CSRMatrix matrix;
  Vec rhs;
  std::vector<int> free_to_full;
  int full_size = 0;

  /// Re-expand a free-dof vector with zeros at constrained dofs.
  Vec expand(const Vec& x_free) const;
};

ReducedSystem apply_dirichlet(const CSRMatrix& k, const Vec& b,
                              const GlobalLagrangeSpace& space);

/// MatrixMarket coordinate format, symmetric, lower triangle, 1-based.
void write_matrix_market(std::ostream& os, const CSRMatrix& m);

}  // namespace tfem
