#pragma once

#include <functional>

#include "tfem/mesh.hpp"

namespace tfem {

/// Evaluable fields. The region argument resolves the branch of piecewise
/// definitions on region interfaces; pass -1 to let the field decide from the
/// point alone (safe at interior points).
struct ScalarField {
  std::function<double(const Vec&, int)> value;
  std::function<Vec(const Vec&, int)> gradient;  // may be empty
};

struct VectorField {
  std::function<Vec(const Vec&, int)> value;
};

struct TensorField {
  std::function<Mat(const Vec&, int)> value;
};

/// Map from the parametric onto the physical domain, with region-resolved
/// Jacobian. inverse_map is optional.
struct CoordinateTransformation {
  std::function<Vec(const Vec&)> map;
  std::function<Mat(const Vec&, int)> jacobian;
  std::function<Vec(const Vec&)> inverse_map;  // may be empty
  std::function<int(const Vec&)> region_of;

  Mat jacobian_at(const Vec& x, int region) const {
    return jacobian(x, region < 0 ? region_of(x) : region);
  }
};

struct PhysicalProblem {
  TensorField coefficient;  // symmetric positive definite
  ScalarField f;
  VectorField g;
};

struct ParametricProblem {
  TensorField coefficient;  // parametric coefficient A-hat
  ScalarField f;
  VectorField g;
};

/// A-hat(x) = |det DPhi| DPhi^{-1} A(Phi(x)) DPhi^{-T}, symmetrized.
TensorField pullback_coefficient(const CoordinateTransformation& phi,
                                 const TensorField& physical);

/// f-hat = |det DPhi| f(Phi(x)); g-hat = |det DPhi| DPhi^{-1} g(Phi(x)).
std::pair<ScalarField, VectorField> pullback_rhs(const CoordinateTransformation& phi,
                                                 const ScalarField& f,
                                                 const VectorField& g);

/// u-hat = u(Phi(x)), grad u-hat = DPhi^T grad u(Phi(x)).
ScalarField pullback_scalar(const CoordinateTransformation& phi, const ScalarField& u);

ParametricProblem pullback_problem(const CoordinateTransformation& phi,
                                   const PhysicalProblem& p);

double jacobian_determinant(const CoordinateTransformation& phi, const Vec& x, int region);

}  // namespace tfem
