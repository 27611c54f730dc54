#pragma once

#include <stdexcept>
#include <string>

namespace tfem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mesh
struct DegenerateCell : Error { using Error::Error; };
struct NonSimplicialIntersection : Error { using Error::Error; };
struct NonBoundaryDirichletFacet : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };

// elements
struct InvalidDegree : Error { using Error::Error; };
struct PointOutsideSimplex : Error { using Error::Error; };
struct SingularMassMatrix : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };

// interp
struct NoAdmissibleFacet : Error { using Error::Error; };
struct NotFaceConnected : Error { using Error::Error; };

// geometry
struct SingularJacobian : Error { using Error::Error; };
struct EvaluationAtOrigin : Error { using Error::Error; };
struct OutsideDomain : Error { using Error::Error; };

// assembly / solver
struct EvaluationFailure : Error { using Error::Error; };
struct NonPositiveCoefficient : Error { using Error::Error; };
struct AllDofsConstrained : Error { using Error::Error; };
struct MaxIterations : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };

// analysis
struct NonPositiveError : Error { using Error::Error; };

}  // namespace tfem
