#include "tfem/geometry.hpp"

#include <cmath>

namespace tfem {

namespace {

Mat inverse_jacobian(const CoordinateTransformation& phi, const Vec& x, int region,
                     double& det) {
  const Mat j = phi.jacobian_at(x, region);
  det = j.determinant();
  const double scale = j.cwiseAbs().maxCoeff();
  if (std::abs(det) < 1e-14 * std::pow(scale, j.rows()))
    throw SingularJacobian("transformation Jacobian is singular");
  return j.inverse();
}

}  // namespace

double jacobian_determinant(const CoordinateTransformation& phi, const Vec& x,
                            int region) {
  return phi.jacobian_at(x, region).determinant();
}

TensorField pullback_coefficient(const CoordinateTransformation& phi,
                                 const TensorField& physical) {
  TensorField out;
  out.value = [phi, physical](const Vec& x, int region) {
    double det;
    const Mat jinv = inverse_jacobian(phi, x, region, det);
    const Mat a = physical.value(phi.map(x), -1);
    Mat ahat = std::abs(det) * jinv * a * jinv.transpose();
    return Mat(0.5 * (ahat + ahat.transpose()));
  };
  return out;
}

std::pair<ScalarField, VectorField> pullback_rhs(const CoordinateTransformation& phi,
                                                 const ScalarField& f,
                                                 const VectorField& g) {
  ScalarField fhat;
  fhat.value = [phi, f](const Vec& x, int region) {
    const double det = jacobian_determinant(phi, x, region);
    return std::abs(det) * f.value(phi.map(x), -1);
  };
  VectorField ghat;
  ghat.value = [phi, g](const Vec& x, int region) {
    double det;
    const Mat jinv = inverse_jacobian(phi, x, region, det);
    return Vec(std::abs(det) * jinv * g.value(phi.map(x), -1));
  };
  return {fhat, ghat};
}

ScalarField pullback_scalar(const CoordinateTransformation& phi, const ScalarField& u) {
  ScalarField out;
  out.value = [phi, u](const Vec& x, int region) {
    return u.value(phi.map(x), -1);
  };
  if (u.gradient) {
    out.gradient = [phi, u](const Vec& x, int region) {
      const Mat j = phi.jacobian_at(x, region);
      return Vec(j.transpose() * u.gradient(phi.map(x), -1));
    };
  }
  return out;
}

ParametricProblem pullback_problem(const CoordinateTransformation& phi,
                                   const PhysicalProblem& p) {
  ParametricProblem out;
  out.coefficient = pullback_coefficient(phi, p.coefficient);
  auto [fhat, ghat] = pullback_rhs(phi, p.f, p.g);
  out.f = fhat;
  out.g = ghat;
  return out;
}

}  // namespace tfem
