#include "tfem/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace tfem {

namespace {

void enumerate_subsets(const std::vector<int>& verts, int size,
                       std::vector<std::vector<int>>& out) {
  const int m = static_cast<int>(verts.size());
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    std::vector<int> sub(size);
    for (int i = 0; i < size; ++i) sub[i] = verts[idx[i]];
    out.push_back(std::move(sub));
    int i = size - 1;
    while (i >= 0 && idx[i] == m - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int index_of_alpha(const LagrangePointSet& lat, const std::vector<int>& alpha) {
  for (int i = 0; i < lat.count(); ++i)
    if (lat.alpha[i] == alpha) return i;
  throw Error("Lagrange multi-index not found in lattice");
}

// interleaved (vertex id, multiplicity) key identifying a global Lagrange point
std::vector<int> support_key(const std::vector<int>& support,
                             const std::vector<int>& alpha) {
  std::vector<int> key;
  key.reserve(2 * support.size());
  for (size_t i = 0; i < support.size(); ++i) {
    key.push_back(support[i]);
    key.push_back(alpha[i]);
  }
  return key;
}

}  // namespace

int GlobalLagrangeSpace::num_free() const {
  int f = 0;
  for (bool d : dirichlet)
    if (!d) ++f;
  return f;
}

GlobalLagrangeSpace build_space(const SimplicialComplex& c, int r, bool conforming) {
  if (r < 1) throw InvalidDegree("Lagrange degree must be >= 1");
  const int n = c.dim;
  const auto lat = lagrange_lattice(n, r);

  GlobalLagrangeSpace s;
  s.mesh = &c;
  s.degree = r;
  s.conforming = conforming;
  s.cell_dofs.assign(c.num_cells(), std::vector<int>(lat.count()));

  // subsimplices of Dirichlet facets, for the boundary mask
  std::set<std::vector<int>> dirichlet_faces;
  for (int f : c.dirichlet_facets) {
    const auto& ids = c.simplices[n - 1][f].vertex_ids;
    for (int k = 1; k <= n; ++k) {
      std::vector<std::vector<int>> subs;
      enumerate_subsets(ids, k, subs);
      for (auto& sub : subs) dirichlet_faces.insert(std::move(sub));
    }
  }

  std::map<std::vector<int>, int> global_id;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& verts = c.cell(ci).vertex_ids;
    for (int i = 0; i < lat.count(); ++i) {
      std::vector<int> support, alpha;
      for (int k = 0; k <= n; ++k) {
        if (lat.alpha[i][k] > 0) {
          support.push_back(verts[k]);
          alpha.push_back(lat.alpha[i][k]);
        }
      }
      int id;
      if (conforming) {
        const auto key = support_key(support, alpha);
        auto it = global_id.find(key);
        if (it != global_id.end()) {
          id = it->second;
          s.cell_dofs[ci][i] = id;
          continue;
        }
        id = s.num_dofs++;
        global_id.emplace(key, id);
      } else {
        id = s.num_dofs++;
      }
      s.cell_dofs[ci][i] = id;
      Vec pt = Vec::Zero(n);
      for (size_t k = 0; k < support.size(); ++k)
        pt += (static_cast<double>(alpha[k]) / r) * c.vertices[support[k]];
      s.dof_points.push_back(pt);
      s.dof_support.push_back(support);
      s.dof_alpha.push_back(alpha);
      s.dirichlet.push_back(dirichlet_faces.count(support) > 0);
    }
  }
  return s;
}

DofAssignment build_dof_assignment(const GlobalLagrangeSpace& space) {
  const auto& c = *space.mesh;
  const int n = c.dim;
  const int r = space.degree;
  const auto cell_lat = lagrange_lattice(n, r);
  const auto facet_lat = lagrange_lattice(n - 1, r);

  // face tuple -> facets containing it
  std::map<std::vector<int>, std::vector<int>> face_to_facets;
  for (size_t f = 0; f < c.simplices[n - 1].size(); ++f) {
    const auto& ids = c.simplices[n - 1][f].vertex_ids;
    for (int k = 1; k <= n; ++k) {
      std::vector<std::vector<int>> subs;
      enumerate_subsets(ids, k, subs);
      for (auto& sub : subs) face_to_facets[sub].push_back(static_cast<int>(f));
    }
  }

  DofAssignment a;
  a.items.resize(space.num_dofs);
  for (int dof = 0; dof < space.num_dofs; ++dof) {
    const auto& support = space.dof_support[dof];
    const auto& alpha = space.dof_alpha[dof];
    if (static_cast<int>(support.size()) == n + 1) {
      // interior point of a cell
      const int cell = c.index_of[n].at(support);
      a.items[dof] = {DofAssignment::Kind::InteriorCell, cell,
                      index_of_alpha(cell_lat, alpha)};
      continue;
    }
    auto it = face_to_facets.find(support);
    std::vector<int> candidates =
        (it != face_to_facets.end()) ? it->second : std::vector<int>{};
    if (space.dirichlet[dof]) {
      std::vector<int> filtered;
      for (int f : candidates)
        if (c.is_dirichlet_facet(f)) filtered.push_back(f);
      candidates = std::move(filtered);
      if (candidates.empty())
        throw NoAdmissibleFacet("Dirichlet Lagrange point without Dirichlet facet");
    }
    if (candidates.empty())
      throw NoAdmissibleFacet("Lagrange point without carrier facet");
    const int facet = *std::min_element(candidates.begin(), candidates.end());

    // multi-index of the point within the facet's lattice
    const auto& fverts = c.simplices[n - 1][facet].vertex_ids;
    std::vector<int> falpha(fverts.size(), 0);
    for (size_t k = 0; k < support.size(); ++k) {
      const auto pos = std::find(fverts.begin(), fverts.end(), support[k]);
      falpha[pos - fverts.begin()] = alpha[k];
    }
    a.items[dof] = {DofAssignment::Kind::FacetMoment, facet,
                    index_of_alpha(facet_lat, falpha)};
  }
  return a;
}

Vec local_projection(const SimplicialComplex& c, int cell, int r,
                     const ScalarField& v, int quad_degree) {
  const SimplexGeom geom(c.simplex_vertices(c.cell(cell)));
  const Mat mass = local_mass_matrix(geom, r);
  const auto& rule = quadrature(geom.d, quad_degree);
  const auto& tables = basis_tables(geom.d, r, quad_degree);
  const int region = c.region_tags[cell];

  Vec rhs = Vec::Zero(mass.rows());
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec pt = geom.point(rule.points.col(q));
    const double w = rule.weights[q] * geom.measure_factor();
    rhs += (w * v.value(pt, region)) * tables.values.row(q).transpose();
  }
  const Eigen::LLT<Mat> llt(mass);
  if (llt.info() != Eigen::Success)
    throw SingularMassMatrix("local mass matrix not positive definite");
  return llt.solve(rhs);
}

Vec scott_zhang_interpolate(const GlobalLagrangeSpace& space,
                            const DofAssignment& assignment, const ScalarField& v,
                            int quad_degree) {
  const auto& c = *space.mesh;
  const int n = c.dim;
  const int r = space.degree;
  Vec out = Vec::Zero(space.num_dofs);

  // cell projections, computed once per referenced cell
  std::map<int, Vec> projections;
  // facet moments: dual coefficients once per referenced facet
  std::map<int, Vec> facet_moments;  // per facet: integrals of Lagrange basis * v

  const auto& facet_rule = quadrature(n - 1, 2 * r);
  const auto& facet_tables = basis_tables(n - 1, r, 2 * r);

  for (int dof = 0; dof < space.num_dofs; ++dof) {
    const auto& item = assignment.items[dof];
    if (item.kind == DofAssignment::Kind::InteriorCell) {
      auto it = projections.find(item.id);
      if (it == projections.end())
        it = projections.emplace(item.id, local_projection(c, item.id, r, v, quad_degree))
                 .first;
      out[dof] = it->second[item.local_index];
    } else {
      auto it = facet_moments.find(item.id);
      if (it == facet_moments.end()) {
        const SimplexGeom geom(c.simplex_vertices(c.simplices[n - 1][item.id]));
        Vec integrals = Vec::Zero(facet_tables.values.cols());
        for (int q = 0; q < facet_rule.weights.size(); ++q) {
          const Vec pt = geom.point(facet_rule.points.col(q));
          const double w = facet_rule.weights[q] * geom.measure_factor();
          integrals += (w * v.value(pt, -1)) * facet_tables.values.row(q).transpose();
        }
        const Mat dual = dual_basis(geom, r);
        it = facet_moments.emplace(item.id, Vec(dual.transpose() * integrals)).first;
      }
      out[dof] = it->second[item.local_index];
    }
  }
  return out;
}

namespace {

double cell_error_squared(const SimplicialComplex& c, int cell, int r,
                          const Vec& coeffs, const ScalarField& v, Seminorm sn,
                          int quad_degree) {
  const SimplexGeom geom(c.simplex_vertices(c.cell(cell)));
  const auto& rule = quadrature(geom.d, quad_degree);
  const auto& tables = basis_tables(geom.d, r, quad_degree);
  const int region = c.region_tags[cell];
  double acc = 0;
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec pt = geom.point(rule.points.col(q));
    const double w = rule.weights[q] * geom.measure_factor();
    if (sn == Seminorm::L2) {
      const double fe = tables.values.row(q).dot(coeffs);
      const double diff = v.value(pt, region) - fe;
      acc += w * diff * diff;
    } else {
      if (!v.gradient) throw EvaluationFailure("H1 seminorm requires a gradient");
      const Mat grads = tables.lambda_derivs[q] * geom.grad_lambda();  // nb x n
      const Vec fe_grad = grads.transpose() * coeffs;
      const Vec diff = v.gradient(pt, region) - fe_grad;
      acc += w * diff.squaredNorm();
    }
  }
  return acc;
}

}  // namespace

double broken_best_error(const SimplicialComplex& c, int r, const ScalarField& v,
                         Seminorm seminorm, int quad_degree) {
  double acc = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const Vec p = local_projection(c, ci, r, v, quad_degree);
    acc += cell_error_squared(c, ci, r, p, v, seminorm, quad_degree);
  }
  return std::sqrt(acc);
}

double fe_error(const GlobalLagrangeSpace& space, const Vec& coeffs,
                const ScalarField& v, Seminorm seminorm, int quad_degree) {
  const auto& c = *space.mesh;
  double acc = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    Vec local(space.cell_dofs[ci].size());
    for (size_t i = 0; i < space.cell_dofs[ci].size(); ++i)
      local[i] = coeffs[space.cell_dofs[ci][i]];
    acc += cell_error_squared(c, ci, space.degree, local, v, seminorm, quad_degree);
  }
  return std::sqrt(acc);
}

BrokenConformingRatio broken_conforming_ratio(const GlobalLagrangeSpace& space,
                                              const ScalarField& v, int quad_degree) {
  if (!is_face_connected(*space.mesh))
    throw NotFaceConnected("broken/conforming comparison requires a face-connected mesh");
  const auto assignment = build_dof_assignment(space);
  const Vec pi = scott_zhang_interpolate(space, assignment, v, quad_degree);

  BrokenConformingRatio out;
  out.conforming_error = fe_error(space, pi, v, Seminorm::H1Semi, quad_degree);
  out.broken_error =
      broken_best_error(*space.mesh, space.degree, v, Seminorm::H1Semi, quad_degree);
  if (out.conforming_error < 1e-13 && out.broken_error < 1e-13) {
    out.both_zero = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.ratio = out.conforming_error / out.broken_error;
  }
  return out;
}

}  // namespace tfem
