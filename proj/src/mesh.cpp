#include "tfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>

namespace tfem {

namespace {

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

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

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                const Eigen::Vector2d& b, double eps) {
  Eigen::Vector2d ab = b - a, ap = p - a;
  if (std::abs(cross2(ab, ap)) > eps * ab.norm()) return false;
  const double t = ab.dot(ap) / ab.squaredNorm();
  return t > -eps && t < 1 + eps;
}

// True if the segments intersect anywhere, endpoints included.
bool segments_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c, const Eigen::Vector2d& d,
                        double eps) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  const double s1 = eps * (b - a).norm();
  const double s2 = eps * (d - c).norm();
  if (((d1 > s1 && d2 < -s1) || (d1 < -s1 && d2 > s1)) &&
      ((d3 > s2 && d4 < -s2) || (d3 < -s2 && d4 > s2)))
    return true;
  return on_segment(c, a, b, eps) || on_segment(d, a, b, eps) ||
         on_segment(a, c, d, eps) || on_segment(b, c, d, eps);
}

// Pairwise-intersection validation for 2D complexes: any two cells may only
// meet in a shared subsimplex. Uses a uniform grid to prune edge pairs.
void validate_intersections_2d(const SimplicialComplex& c) {
  const auto& edges = c.simplices[1];
  const int ne = static_cast<int>(edges.size());
  if (ne == 0) return;

  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300, avg_len = 0;
  for (const auto& e : edges) {
    const Vec& p = c.vertices[e.vertex_ids[0]];
    const Vec& q = c.vertices[e.vertex_ids[1]];
    minx = std::min({minx, p[0], q[0]});
    maxx = std::max({maxx, p[0], q[0]});
    miny = std::min({miny, p[1], q[1]});
    maxy = std::max({maxy, p[1], q[1]});
    avg_len += (p - q).norm();
  }
  avg_len /= ne;
  const double scale = std::max({maxx - minx, maxy - miny, 1e-300});
  const double eps = 1e-12 * scale;
  const double cell = std::max(avg_len, 1e-12 * scale);
  const int nx = std::max(1, static_cast<int>((maxx - minx) / cell) + 1);
  const int ny = std::max(1, static_cast<int>((maxy - miny) / cell) + 1);

  auto bucket = [&](double x, double y) {
    int ix = std::min(nx - 1, std::max(0, static_cast<int>((x - minx) / cell)));
    int iy = std::min(ny - 1, std::max(0, static_cast<int>((y - miny) / cell)));
    return iy * nx + ix;
  };
  std::unordered_map<int, std::vector<int>> grid;
  for (int i = 0; i < ne; ++i) {
    const Vec& p = c.vertices[edges[i].vertex_ids[0]];
    const Vec& q = c.vertices[edges[i].vertex_ids[1]];
    const int bx0 = bucket(std::min(p[0], q[0]), std::min(p[1], q[1]));
    const int bx1 = bucket(std::max(p[0], q[0]), std::max(p[1], q[1]));
    const int ix0 = bx0 % nx, iy0 = bx0 / nx, ix1 = bx1 % nx, iy1 = bx1 / nx;
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix) grid[iy * nx + ix].push_back(i);
  }

  std::set<std::pair<int, int>> seen;
  for (const auto& [key, bin] : grid) {
    for (size_t a = 0; a < bin.size(); ++a) {
      for (size_t b = a + 1; b < bin.size(); ++b) {
        const int i = std::min(bin[a], bin[b]), j = std::max(bin[a], bin[b]);
        if (!seen.insert({i, j}).second) continue;
        const auto& vi = edges[i].vertex_ids;
        const auto& vj = edges[j].vertex_ids;
        std::vector<int> shared;
        std::set_intersection(vi.begin(), vi.end(), vj.begin(), vj.end(),
                              std::back_inserter(shared));
        const Eigen::Vector2d p0 = c.vertices[vi[0]].head<2>();
        const Eigen::Vector2d p1 = c.vertices[vi[1]].head<2>();
        const Eigen::Vector2d q0 = c.vertices[vj[0]].head<2>();
        const Eigen::Vector2d q1 = c.vertices[vj[1]].head<2>();
        if (shared.size() == 1) {
          // may touch only at the shared vertex
          const int s = shared[0];
          const Eigen::Vector2d pf = (vi[0] == s) ? p1 : p0;
          const Eigen::Vector2d qf = (vj[0] == s) ? q1 : q0;
          if (on_segment(pf, q0, q1, eps) || on_segment(qf, p0, p1, eps))
            throw NonSimplicialIntersection("edges overlap beyond a shared vertex");
        } else if (shared.empty()) {
          if (segments_intersect(p0, p1, q0, q1, eps))
            throw NonSimplicialIntersection("edges intersect improperly");
        }
      }
    }
  }

  // no vertex may sit strictly inside a cell it does not belong to
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& t = c.cell(ci);
    const Eigen::Vector2d a = c.vertices[t.vertex_ids[0]].head<2>();
    const Eigen::Vector2d b = c.vertices[t.vertex_ids[1]].head<2>();
    const Eigen::Vector2d d = c.vertices[t.vertex_ids[2]].head<2>();
    const double det = cross2(b - a, d - a);
    for (int v = 0; v < static_cast<int>(c.vertices.size()); ++v) {
      if (std::binary_search(t.vertex_ids.begin(), t.vertex_ids.end(), v)) continue;
      const Eigen::Vector2d p = c.vertices[v].head<2>();
      const double l1 = cross2(b - a, p - a) / det;
      const double l2 = cross2(p - a, d - a) / det;
      const double l0 = 1 - l1 - l2;
      const double tol = 1e-10;
      if (l0 > tol && l1 > tol && l2 > tol)
        throw NonSimplicialIntersection("vertex inside a foreign cell");
    }
  }
}

SimplicialComplex build_complex_impl(const std::vector<Vec>& vertices,
                                     const std::vector<std::vector<int>>& cells,
                                     const std::vector<std::vector<int>>& dirichlet_facets,
                                     const std::vector<int>& region_tags,
                                     bool validate_geometry) {
  if (cells.empty()) throw Error("build_complex: no cells");
  const int n = static_cast<int>(vertices[0].size());

  SimplicialComplex c;
  c.dim = n;
  c.vertices = vertices;
  c.simplices.resize(n + 1);
  c.index_of.resize(n + 1);

  auto add_simplex = [&](std::vector<int> ids) -> int {
    const int d = static_cast<int>(ids.size()) - 1;
    auto it = c.index_of[d].find(ids);
    if (it != c.index_of[d].end()) return it->second;
    const int id = static_cast<int>(c.simplices[d].size());
    c.index_of[d].emplace(ids, id);
    c.simplices[d].push_back(Simplex{std::move(ids)});
    return id;
  };

  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<int> ids = cells[ci];
    if (static_cast<int>(ids.size()) != n + 1)
      throw Error("build_complex: cell arity does not match dimension");
    for (int v : ids)
      if (v < 0 || v >= static_cast<int>(vertices.size()))
        throw Error("build_complex: vertex id out of range");
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw DegenerateCell("repeated vertex in cell");
    // closure: every subsimplex is stored
    for (int d = 0; d <= n; ++d) {
      std::vector<std::vector<int>> subs;
      enumerate_subsets(ids, d + 1, subs);
      for (auto& s : subs) add_simplex(std::move(s));
    }
  }

  for (const auto& cell : c.simplices[n]) {
    Mat verts = c.simplex_vertices(cell);
    if (simplex_volume(verts) <= 1e-14 * std::pow(simplex_diameter(verts), n))
      throw DegenerateCell("cell has zero volume");
  }

  c.region_tags.assign(c.num_cells(), 0);
  // region tags follow the input cell order; map through sorted ids
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<int> ids = cells[ci];
    std::sort(ids.begin(), ids.end());
    const int id = c.index_of[n].at(ids);
    c.region_tags[id] = region_tags.empty() ? 0 : region_tags[ci];
  }

  // facet-to-cell incidence
  c.facet_cells.assign(c.simplices[n - 1].size(), {});
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& ids = c.cell(ci).vertex_ids;
    std::vector<std::vector<int>> facets;
    enumerate_subsets(ids, n, facets);
    for (const auto& f : facets) c.facet_cells[c.index_of[n - 1].at(f)].push_back(ci);
  }

  c.dirichlet_mask.assign(c.simplices[n - 1].size(), false);
  for (auto f : dirichlet_facets) {
    std::vector<int> ids = f;
    std::sort(ids.begin(), ids.end());
    auto it = c.index_of[n - 1].find(ids);
    if (it == c.index_of[n - 1].end())
      throw NonBoundaryDirichletFacet("Dirichlet facet is not a facet of the complex");
    if (c.facet_cells[it->second].size() != 1)
      throw NonBoundaryDirichletFacet("Dirichlet facet is not a boundary facet");
    if (!c.dirichlet_mask[it->second]) {
      c.dirichlet_mask[it->second] = true;
      c.dirichlet_facets.push_back(it->second);
    }
  }
  std::sort(c.dirichlet_facets.begin(), c.dirichlet_facets.end());

  if (validate_geometry && n == 2) validate_intersections_2d(c);
  return c;
}

}  // namespace

Mat SimplicialComplex::simplex_vertices(const Simplex& s) const {
  Mat m(dim, s.vertex_ids.size());
  for (size_t i = 0; i < s.vertex_ids.size(); ++i) m.col(i) = vertices[s.vertex_ids[i]];
  return m;
}

SimplicialComplex build_complex(const std::vector<Vec>& vertices,
                                const std::vector<std::vector<int>>& cells,
                                const std::vector<std::vector<int>>& dirichlet_facets,
                                const std::vector<int>& region_tags) {
  return build_complex_impl(vertices, cells, dirichlet_facets, region_tags, true);
}

SimplicialComplex refine_uniform(const SimplicialComplex& c) {
  if (c.dim != 2) throw UnsupportedDimension("uniform refinement implemented for n=2 only");

  std::vector<Vec> verts = c.vertices;
  const int nv = static_cast<int>(verts.size());
  // midpoint vertex per parent edge, keyed by edge id
  std::vector<int> edge_mid(c.simplices[1].size());
  for (size_t e = 0; e < c.simplices[1].size(); ++e) {
    const auto& ids = c.simplices[1][e].vertex_ids;
    verts.push_back((c.vertices[ids[0]] + c.vertices[ids[1]]) * 0.5);
    edge_mid[e] = nv + static_cast<int>(e);
  }

  auto mid = [&](int a, int b) {
    std::vector<int> key{std::min(a, b), std::max(a, b)};
    return edge_mid[c.index_of[1].at(key)];
  };

  std::vector<std::vector<int>> cells;
  std::vector<int> tags;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& v = c.cell(ci).vertex_ids;
    const int mab = mid(v[0], v[1]), mac = mid(v[0], v[2]), mbc = mid(v[1], v[2]);
    cells.push_back({v[0], mab, mac});
    cells.push_back({v[1], mab, mbc});
    cells.push_back({v[2], mac, mbc});
    cells.push_back({mab, mac, mbc});
    for (int k = 0; k < 4; ++k) tags.push_back(c.region_tags[ci]);
  }

  std::vector<std::vector<int>> dirichlet;
  for (int f : c.dirichlet_facets) {
    const auto& ids = c.simplices[1][f].vertex_ids;
    const int m = mid(ids[0], ids[1]);
    dirichlet.push_back({ids[0], m});
    dirichlet.push_back({m, ids[1]});
  }

  return build_complex_impl(verts, cells, dirichlet, tags, false);
}

SimplicialComplex refine_bisection(const SimplicialComplex& c) {
  if (c.dim != 2) throw UnsupportedDimension("bisection refinement implemented for n=2 only");

  std::vector<Vec> verts = c.vertices;
  const int nv = static_cast<int>(verts.size());
  std::vector<int> edge_mid(c.simplices[1].size());
  for (size_t e = 0; e < c.simplices[1].size(); ++e) {
    const auto& ids = c.simplices[1][e].vertex_ids;
    verts.push_back((c.vertices[ids[0]] + c.vertices[ids[1]]) * 0.5);
    edge_mid[e] = nv + static_cast<int>(e);
  }
  auto mid = [&](int a, int b) {
    std::vector<int> key{std::min(a, b), std::max(a, b)};
    return edge_mid[c.index_of[1].at(key)];
  };

  std::vector<std::vector<int>> cells;
  std::vector<int> tags;
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    const auto& v = c.cell(ci).vertex_ids;
    // longest edge, ties broken toward lower vertex ids
    int ia = 0, ib = 1;
    double best = -1;
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& p : pairs) {
      const double len = (c.vertices[v[p[0]]] - c.vertices[v[p[1]]]).norm();
      if (len > best + 1e-14 * (1 + best)) {
        best = len;
        ia = p[0];
        ib = p[1];
      }
    }
    const int ic = 3 - ia - ib;
    const int a = v[ia], b = v[ib], opp = v[ic];
    const int mab = mid(a, b), mao = mid(a, opp), mbo = mid(b, opp);
    cells.push_back({a, mab, mao});
    cells.push_back({mab, opp, mao});
    cells.push_back({mab, b, mbo});
    cells.push_back({mab, opp, mbo});
    for (int k = 0; k < 4; ++k) tags.push_back(c.region_tags[ci]);
  }

  std::vector<std::vector<int>> dirichlet;
  for (int f : c.dirichlet_facets) {
    const auto& ids = c.simplices[1][f].vertex_ids;
    const int m = mid(ids[0], ids[1]);
    dirichlet.push_back({ids[0], m});
    dirichlet.push_back({m, ids[1]});
  }

  return build_complex_impl(verts, cells, dirichlet, tags, false);
}

double simplex_volume(const Mat& verts) {
  const int d = static_cast<int>(verts.cols()) - 1;
  if (d == 0) return 1.0;
  Mat e(verts.rows(), d);
  for (int i = 0; i < d; ++i) e.col(i) = verts.col(i + 1) - verts.col(0);
  const Mat gram = e.transpose() * e;
  const double g = gram.determinant();
  if (g <= 0) return 0.0;
  return std::sqrt(g) / factorial(d);
}

double simplex_diameter(const Mat& verts) {
  double h = 0;
  for (int i = 0; i < verts.cols(); ++i)
    for (int j = i + 1; j < verts.cols(); ++j)
      h = std::max(h, (verts.col(i) - verts.col(j)).norm());
  return h;
}

double shape_measure(const Simplex& t, const SimplicialComplex& c) {
  const Mat verts = c.simplex_vertices(t);
  const double vol = simplex_volume(verts);
  if (vol <= 0) throw DegenerateCell("shape measure of degenerate simplex");
  return std::pow(simplex_diameter(verts), t.dim()) / vol;
}

double shape_measure(const SimplicialComplex& c) {
  double mu = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci) mu = std::max(mu, shape_measure(c.cell(ci), c));
  return mu;
}

double mesh_size(const SimplicialComplex& c) {
  if (c.num_cells() == 0) throw Error("mesh_size: empty complex");
  double h = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci)
    h = std::max(h, simplex_diameter(c.simplex_vertices(c.cell(ci))));
  return h;
}

bool is_face_connected(const SimplicialComplex& c) {
  const int n = c.dim;
  std::vector<std::vector<int>> vertex_star(c.vertices.size());
  for (int ci = 0; ci < c.num_cells(); ++ci)
    for (int v : c.cell(ci).vertex_ids) vertex_star[v].push_back(ci);

  std::set<std::pair<int, int>> pairs;
  for (const auto& star : vertex_star)
    for (size_t a = 0; a < star.size(); ++a)
      for (size_t b = a + 1; b < star.size(); ++b)
        pairs.insert({std::min(star[a], star[b]), std::max(star[a], star[b])});

  for (auto [s, t] : pairs) {
    const auto& vs = c.cell(s).vertex_ids;
    const auto& vt = c.cell(t).vertex_ids;
    std::vector<int> inter;
    std::set_intersection(vs.begin(), vs.end(), vt.begin(), vt.end(),
                          std::back_inserter(inter));
    if (inter.empty()) continue;

    auto contains_inter = [&](const std::vector<int>& ids) {
      return std::includes(ids.begin(), ids.end(), inter.begin(), inter.end());
    };

    // BFS over cells containing the intersection, crossing only facets that
    // themselves contain the intersection
    std::set<int> visited{s};
    std::queue<int> q;
    q.push(s);
    bool found = (s == t);
    while (!q.empty() && !found) {
      const int cur = q.front();
      q.pop();
      std::vector<std::vector<int>> facets;
      enumerate_subsets(c.cell(cur).vertex_ids, n, facets);
      for (const auto& f : facets) {
        if (!contains_inter(f)) continue;
        const int fid = c.index_of[n - 1].at(f);
        for (int nb : c.facet_cells[fid]) {
          if (nb == cur || visited.count(nb)) continue;
          if (!contains_inter(c.cell(nb).vertex_ids)) continue;
          if (nb == t) { found = true; break; }
          visited.insert(nb);
          q.push(nb);
        }
        if (found) break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace tfem
