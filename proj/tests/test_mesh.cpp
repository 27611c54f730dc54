#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tfem/builtin.hpp"
#include "tfem/mesh.hpp"
#include "tfem/mesh_io.hpp"

using namespace tfem;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

SimplicialComplex unit_triangle() {
  return build_complex({v2(0, 0), v2(1, 0), v2(0, 1)}, {{0, 1, 2}}, {}, {0});
}

double total_volume(const SimplicialComplex& c) {
  double vol = 0;
  for (int ci = 0; ci < c.num_cells(); ++ci)
    vol += simplex_volume(c.simplex_vertices(c.cell(ci)));
  return vol;
}

}  // namespace

TEST_CASE("complex closure and counts for the coarse anulus") {
  const auto c = annulus_mesh();
  CHECK(c.dim == 2);
  CHECK(c.vertices.size() == 8);
  CHECK(c.num_cells() == 8);
  CHECK(c.simplices[1].size() == 16);
  CHECK(c.dirichlet_facets.size() == 8);
  for (int f : c.dirichlet_facets) CHECK(c.facet_cells[f].size() == 1);
  CHECK(mesh_size(c) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(is_face_connected(c));
}

TEST_CASE("coarse ball quadrant") {
  const auto c = ball_quadrant_mesh();
  CHECK(c.vertices.size() == 5);
  CHECK(c.num_cells() == 3);
  CHECK(c.dirichlet_facets.size() == 5);
  CHECK(total_volume(c) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(is_face_connected(c));
}

TEST_CASE("shape measure") {
  const auto c = unit_triangle();
  CHECK(shape_measure(c.cell(0), c) == doctest::Approx(4.0).epsilon(1e-13));

  // equilateral with unit sides: 1 / (sqrt(3)/4)
  const double s3 = std::sqrt(3.0) / 2;
  const auto eq = build_complex({v2(0, 0), v2(1, 0), v2(0.5, s3)}, {{0, 1, 2}}, {}, {0});
  CHECK(shape_measure(eq) == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("red refinement scaling") {
  auto c = unit_triangle();
  const double mu = shape_measure(c);
  const double h0 = mesh_size(c);
  auto r1 = refine_uniform(c);
  CHECK(r1.num_cells() == 4);
  CHECK(mesh_size(r1) == doctest::Approx(h0 / 2).epsilon(1e-14));
  for (int ci = 0; ci < 4; ++ci) {
    CHECK(simplex_volume(r1.simplex_vertices(r1.cell(ci))) ==
          doctest::Approx(0.5 / 4).epsilon(1e-13));
    CHECK(shape_measure(r1.cell(ci), r1) == doctest::Approx(mu).epsilon(1e-13));
  }
  auto r2 = refine_uniform(r1);
  CHECK(r2.num_cells() == 16);
  CHECK(mesh_size(r2) == doctest::Approx(h0 / 4).epsilon(1e-14));
  CHECK(total_volume(r2) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("red refinement of the anulus") {
  const auto c = annulus_mesh();
  const auto r = refine_uniform(c);
  CHECK(r.num_cells() == 32);
  CHECK(r.dirichlet_facets.size() == 16);
  CHECK(mesh_size(r) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(total_volume(r) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(is_face_connected(r));
  // children inherit tags
  for (int ci = 0; ci < r.num_cells(); ++ci) {
    CHECK(r.region_tags[ci] >= 0);
    CHECK(r.region_tags[ci] < 4);
  }
  // Dirichlet facets stay on the boundary
  for (int f : r.dirichlet_facets) CHECK(r.facet_cells[f].size() == 1);
}

TEST_CASE("bisection refinement scaling") {
  auto c = annulus_mesh();
  auto r = refine_bisection(c);
  CHECK(r.num_cells() == 32);
  CHECK(total_volume(r) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(r.dirichlet_facets.size() == 16);
  for (int f : r.dirichlet_facets) CHECK(r.facet_cells[f].size() == 1);
  CHECK(is_face_connected(r));
  // shape quality stays bounded over the hierarchy
  for (int i = 0; i < 3; ++i) r = refine_bisection(r);
  CHECK(shape_measure(r) < 20.0);
  CHECK(total_volume(r) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("degenerate cells are rejected") {
  CHECK_THROWS_AS(build_complex({v2(0, 0), v2(1, 0), v2(2, 0)}, {{0, 1, 2}}, {}, {0}),
                  DegenerateCell);
  CHECK_THROWS_AS(build_complex({v2(0, 0), v2(1, 0)}, {{0, 1, 0}}, {}, {0}),
                  DegenerateCell);
}

TEST_CASE("improper intersections are rejected") {
  // vertex 3 sits strictly inside cell {0,1,2}
  CHECK_THROWS_AS(build_complex({v2(0, 0), v2(1, 0), v2(0, 1), v2(0.2, 0.2), v2(1, 1)},
                                {{0, 1, 2}, {3, 1, 4}}, {}, {0, 0}),
                  NonSimplicialIntersection);
  // crossing edges without a shared vertex
  CHECK_THROWS_AS(build_complex({v2(0, 0), v2(2, 0), v2(0, 2), v2(2, 2), v2(3, -1),
                                 v2(-1, 3)},
                                {{0, 1, 2}, {3, 4, 5}}, {}, {0, 0}),
                  NonSimplicialIntersection);
}

TEST_CASE("dirichlet facet validation") {
  // interior facet
  const std::vector<Vec> vs{v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)};
  CHECK_THROWS_AS(build_complex(vs, {{0, 1, 2}, {1, 2, 3}}, {{1, 2}}, {0, 0}),
                  NonBoundaryDirichletFacet);
  // not a facet at all
  CHECK_THROWS_AS(build_complex(vs, {{0, 1, 2}, {1, 2, 3}}, {{0, 3}}, {0, 0}),
                  NonBoundaryDirichletFacet);
  // valid boundary facet passes
  CHECK_NOTHROW(build_complex(vs, {{0, 1, 2}, {1, 2, 3}}, {{0, 1}}, {0, 0}));
}

TEST_CASE("face connectivity detects a pinched vertex") {
  const auto butterfly = build_complex(
      {v2(0, 0), v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)},
      {{0, 1, 2}, {0, 3, 4}}, {}, {0, 0});
  CHECK_FALSE(is_face_connected(butterfly));
}

TEST_CASE("mesh file round trip is byte identical") {
  const auto c = refine_uniform(annulus_mesh());
  std::ostringstream first;
  write_mesh(first, c);
  std::istringstream in(first.str());
  const auto back = read_mesh(in);
  std::ostringstream second;
  write_mesh(second, back);
  CHECK(first.str() == second.str());
  CHECK(back.num_cells() == c.num_cells());
  CHECK(back.dirichlet_facets == c.dirichlet_facets);
  CHECK(back.region_tags == c.region_tags);
}

TEST_CASE("refinement rejects non-2d complexes") {
  Vec a(1), b(1);
  a << 0;
  b << 1;
  const auto line = build_complex({a, b}, {{0, 1}}, {}, {0});
  CHECK_THROWS_AS(refine_uniform(line), UnsupportedDimension);
  CHECK_THROWS_AS(refine_bisection(line), UnsupportedDimension);
}
