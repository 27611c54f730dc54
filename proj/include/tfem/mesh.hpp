#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "tfem/errors.hpp"

namespace tfem {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A d-simplex stored as its strictly increasing vertex id list.
struct Simplex {
  std::vector<int> vertex_ids;
  int dim() const { return static_cast<int>(vertex_ids.size()) - 1; }
};

/// Simplicial complex over R^n, closed under taking subsimplices.
/// Immutable after construction; all queries are read-only.
struct SimplicialComplex {
  int dim = 0;                    // ambient and cell dimension n
  std::vector<Vec> vertices;
  std::vector<std::vector<Simplex>> simplices;  // simplices[d] = all d-simplices
  std::vector<int> dirichlet_facets;            // ids into simplices[n-1], sorted
  std::vector<int> region_tags;                 // one per n-cell

  // derived lookup structures
  std::vector<std::map<std::vector<int>, int>> index_of;  // per-dim vertex tuple -> id
  std::vector<std::vector<int>> facet_cells;              // per (n-1)-simplex: incident cells
  std::vector<bool> dirichlet_mask;                       // per (n-1)-simplex

  int num_cells() const { return static_cast<int>(simplices[dim].size()); }
  const Simplex& cell(int c) const { return simplices[dim][c]; }

  /// Vertex coordinates of a simplex as an n x (d+1) matrix.
  Mat simplex_vertices(const Simplex& s) const;

  bool is_dirichlet_facet(int facet_id) const { return dirichlet_mask[facet_id]; }
};

SimplicialComplex build_complex(const std::vector<Vec>& vertices,
                                const std::vector<std::vector<int>>& cells,
                                const std::vector<std::vector<int>>& dirichlet_facets,
                                const std::vector<int>& region_tags);

/// Red refinement of a 2D complex; every triangle splits into four congruent
/// children via edge midpoints. Region tags and Dirichlet markers are inherited.
SimplicialComplex refine_uniform(const SimplicialComplex& c);

/// Uniform longest-edge bisection of a 2D complex; every triangle splits into
/// four children by connecting the longest-edge midpoint to the opposite
/// vertex and to the other two edge midpoints. Matches the refinement
/// hierarchy the reference convergence tables were computed on.
SimplicialComplex refine_bisection(const SimplicialComplex& c);

double simplex_volume(const Mat& verts);
double simplex_diameter(const Mat& verts);

/// diam(T)^d / vol(T) for a full-dimensional simplex.
double shape_measure(const Simplex& t, const SimplicialComplex& c);
/// Max of shape_measure over all cells.
double shape_measure(const SimplicialComplex& c);

/// Max diameter over all cells.
double mesh_size(const SimplicialComplex& c);

bool is_face_connected(const SimplicialComplex& c);

}  // namespace tfem
