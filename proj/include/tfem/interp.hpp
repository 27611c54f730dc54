#pragma once

#include <vector>

#include "tfem/elements.hpp"
#include "tfem/geometry.hpp"
#include "tfem/mesh.hpp"

namespace tfem {

/// Global degree-r Lagrange space over a complex. Conforming spaces identify
/// shared Lagrange points combinatorially; broken spaces duplicate them per
/// cell.
struct GlobalLagrangeSpace {
  const SimplicialComplex* mesh = nullptr;
  int degree = 0;
  bool conforming = true;
  int num_dofs = 0;
  std::vector<std::vector<int>> cell_dofs;  // per cell: local index -> global dof
  std::vector<bool> dirichlet;              // per dof
  std::vector<Vec> dof_points;
  std::vector<std::vector<int>> dof_support;  // sorted vertex ids of the carrier face
  std::vector<std::vector<int>> dof_alpha;    // multi-index on the carrier face

  int num_free() const;
};

GlobalLagrangeSpace build_space(const SimplicialComplex& c, int r, bool conforming = true);

/// Owner of each global Lagrange point: an interior point of a cell, or a
/// codimension-1 facet carrying its averaged trace moment.
struct DofAssignment {
  enum class Kind { InteriorCell, FacetMoment };
  struct Item {
    Kind kind;
    int id;           // cell id or facet id
    int local_index;  // index in the owner's Lagrange lattice
  };
  std::vector<Item> items;
};

DofAssignment build_dof_assignment(const GlobalLagrangeSpace& space);

/// L2(T)-orthogonal projection onto P_r(T); coefficients in the Lagrange basis.
Vec local_projection(const SimplicialComplex& c, int cell, int r,
                     const ScalarField& v, int quad_degree);

/// Scott-Zhang-type interpolant onto the conforming space.
Vec scott_zhang_interpolate(const GlobalLagrangeSpace& space,
                            const DofAssignment& assignment, const ScalarField& v,
                            int quad_degree);

enum class Seminorm { L2, H1Semi };

/// Cellwise best-approximation error: the distance of v to the broken space,
/// measured as the root sum of squared per-cell projection errors.
double broken_best_error(const SimplicialComplex& c, int r, const ScalarField& v,
                         Seminorm seminorm, int quad_degree);

/// Error of a conforming FE function against v in the requested seminorm.
double fe_error(const GlobalLagrangeSpace& space, const Vec& coeffs,
                const ScalarField& v, Seminorm seminorm, int quad_degree);

struct BrokenConformingRatio {
  double conforming_error = 0;  // |v - Pi v|_{H1}
  double broken_error = 0;      // cellwise best H1 error
  double ratio = 0;             // NaN when both vanish
  bool both_zero = false;
};

/// Ratio embodied by the broken Bramble-Hilbert comparison; requires a
/// face-connected mesh.
BrokenConformingRatio broken_conforming_ratio(const GlobalLagrangeSpace& space,
                                              const ScalarField& v, int quad_degree);

}  // namespace tfem
