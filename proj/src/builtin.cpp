#include "tfem/builtin.hpp"

#include <cmath>

namespace tfem {

namespace {

// quadrant sign patterns, ordered so that interface points get the lower tag
constexpr double kSx[4] = {1, -1, -1, 1};
constexpr double kSy[4] = {1, 1, -1, -1};

int annulus_region(const Vec& x) {
  for (int t = 0; t < 4; ++t)
    if (kSx[t] * x[0] >= 0 && kSy[t] * x[1] >= 0) return t;
  return 0;  // unreachable
}

int ball_region(const Vec& x) {
  const double eps = 1e-12;
  if (x[0] < -eps || x[1] < -eps || x[0] + x[1] > 1 + eps)
    throw OutsideDomain("point outside the parametric ball quadrant");
  if (x[0] + x[1] <= 0.5) return 0;
  return (x[0] + 2 * x[1] <= 1) ? 1 : 2;
}

}  // namespace

CoordinateTransformation annulus_map() {
  CoordinateTransformation phi;
  phi.region_of = annulus_region;
  phi.map = [](const Vec& x) {
    const double b = x.norm();
    if (b < 1e-300) throw EvaluationAtOrigin("anulus map undefined at the origin");
    const double a = std::abs(x[0]) + std::abs(x[1]);
    return Vec((a / b) * x);
  };
  phi.jacobian = [](const Vec& x, int region) {
    const double b = x.norm();
    if (b < 1e-300) throw EvaluationAtOrigin("anulus map undefined at the origin");
    const double s = kSx[region], t = kSy[region];
    const double a = s * x[0] + t * x[1];
    Eigen::Vector2d grad_ratio;  // gradient of a / b
    grad_ratio[0] = s / b - a * x[0] / (b * b * b);
    grad_ratio[1] = t / b - a * x[1] / (b * b * b);
    Mat j = (a / b) * Mat::Identity(2, 2);
    j += x.head<2>() * grad_ratio.transpose();
    return j;
  };
  phi.inverse_map = [](const Vec& y) {
    const double b = y.norm();
    const double a = std::abs(y[0]) + std::abs(y[1]);
    if (a < 1e-300) throw EvaluationAtOrigin("anulus inverse undefined at the origin");
    return Vec((b / a) * y);
  };
  return phi;
}

CoordinateTransformation ball_quadrant_map() {
  CoordinateTransformation psi;
  psi.region_of = ball_region;
  psi.map = [](const Vec& x) {
    const double a = x[0] + x[1];
    if (a <= 0.5) return Vec(x);
    const double b = x.norm();
    const double sigma = 1 / a - 1 / b + 2 * a / b - 1;
    return Vec(sigma * x);
  };
  psi.jacobian = [](const Vec& x, int region) {
    if (region == 0) return Mat(Mat::Identity(2, 2));
    const double a = x[0] + x[1];
    const double b = x.norm();
    const double sigma = 1 / a - 1 / b + 2 * a / b - 1;
    const Eigen::Vector2d e(1, 1);
    const Eigen::Vector2d grad_sigma =
        -e / (a * a) + 2 * e / b + (1 - 2 * a) * x.head<2>() / (b * b * b);
    Mat j = sigma * Mat::Identity(2, 2);
    j += x.head<2>() * grad_sigma.transpose();
    return j;
  };
  return psi;
}

SimplicialComplex annulus_mesh() {
  std::vector<Vec> v(8, Vec(2));
  v[0] << 1, 0;     // outer east
  v[1] << 0, 1;     // outer north
  v[2] << -1, 0;    // outer west
  v[3] << 0, -1;    // outer south
  v[4] << 0.5, 0;   // inner east
  v[5] << 0, 0.5;   // inner north
  v[6] << -0.5, 0;  // inner west
  v[7] << 0, -0.5;  // inner south
  const std::vector<std::vector<int>> cells = {
      {0, 4, 5}, {0, 5, 1},  // quadrant x>0, y>0
      {1, 5, 6}, {1, 6, 2},  // quadrant x<0, y>0
      {2, 6, 7}, {2, 7, 3},  // quadrant x<0, y<0
      {3, 7, 4}, {3, 4, 0},  // quadrant x>0, y<0
  };
  const std::vector<int> tags = {0, 0, 1, 1, 2, 2, 3, 3};
  const std::vector<std::vector<int>> dirichlet = {
      {0, 1}, {1, 2}, {2, 3}, {3, 0},  // outer boundary
      {4, 5}, {5, 6}, {6, 7}, {7, 4},  // inner boundary
  };
  return build_complex(v, cells, dirichlet, tags);
}

SimplicialComplex ball_quadrant_mesh() {
  std::vector<Vec> v(5, Vec(2));
  v[0] << 0, 0;
  v[1] << 0.5, 0;
  v[2] << 0, 0.5;
  v[3] << 1, 0;
  v[4] << 0, 1;
  const std::vector<std::vector<int>> cells = {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}};
  const std::vector<int> tags = {0, 1, 2};
  const std::vector<std::vector<int>> dirichlet = {
      {0, 1}, {1, 3}, {0, 2}, {2, 4}, {3, 4}};
  return build_complex(v, cells, dirichlet, tags);
}

PhysicalProblem annulus_physical_problem() {
  PhysicalProblem p;
  p.coefficient.value = [](const Vec&, int) { return Mat(Mat::Identity(2, 2)); };
  p.f.value = [](const Vec&, int) { return 1.0; };
  p.g.value = [](const Vec&, int) { return Vec(Vec::Zero(2)); };
  return p;
}

ScalarField annulus_exact_physical() {
  // radially symmetric solution of -laplace(u) = 1, u = 0 at radii 1/2 and 1
  ScalarField u;
  u.value = [](const Vec& x, int) {
    const double r2 = x.squaredNorm();
    return 0.25 + 3 * std::log(r2) / (32 * std::log(2.0)) - r2 / 4;
  };
  u.gradient = [](const Vec& x, int) {
    const double r2 = x.squaredNorm();
    return Vec((3 / (16 * std::log(2.0) * r2) - 0.5) * x);
  };
  return u;
}

PhysicalProblem ball_quadrant_physical_problem() {
  PhysicalProblem p;
  p.coefficient.value = [](const Vec&, int) { return Mat(Mat::Identity(2, 2)); };
  p.f.value = [](const Vec& v, int) {
    const double x = v[0], y = v[1];
    return 24 * x * x * y * y - 2 * (x * x + y * y) +
           2 * (x * x * x * x + y * y * y * y);
  };
  p.g.value = [](const Vec&, int) { return Vec(Vec::Zero(2)); };
  return p;
}

ScalarField ball_quadrant_exact_physical() {
  ScalarField u;
  u.value = [](const Vec& v, int) {
    const double x = v[0], y = v[1];
    return x * x * y * y * (1 - x * x - y * y);
  };
  u.gradient = [](const Vec& v, int) {
    const double x = v[0], y = v[1];
    Vec g(2);
    g[0] = 2 * x * y * y * (1 - x * x - y * y) - 2 * x * x * x * y * y;
    g[1] = 2 * x * x * y * (1 - x * x - y * y) - 2 * x * x * y * y * y;
    return g;
  };
  return u;
}

Experiment make_experiment(const std::string& name) {
  Experiment e;
  if (name == "anulus" || name == "annulus") {
    e.name = "anulus";
    e.mesh = annulus_mesh();
    e.map = annulus_map();
    e.problem = pullback_problem(e.map, annulus_physical_problem());
    e.exact = pullback_scalar(e.map, annulus_exact_physical());
  } else if (name == "ball-quadrant") {
    e.name = "ball-quadrant";
    e.mesh = ball_quadrant_mesh();
    e.map = ball_quadrant_map();
    e.problem = pullback_problem(e.map, ball_quadrant_physical_problem());
    e.exact = pullback_scalar(e.map, ball_quadrant_exact_physical());
  } else {
    throw Error("unknown experiment geometry: " + name);
  }
  return e;
}

}  // namespace tfem
