#pragma once

#include <string>

#include "tfem/geometry.hpp"
#include "tfem/mesh.hpp"

namespace tfem {

// Anulus between Manhattan radii 1/2 and 1, mapped onto the Euclidean anulus
// by x -> (|x|_1 / |x|_2) x. Smooth per coordinate quadrant.
CoordinateTransformation annulus_map();
SimplicialComplex annulus_mesh();

// Positive quadrant of the Manhattan unit ball mapped onto the quadrant of
// the Euclidean unit ball; identity for |x|_1 <= 1/2.
CoordinateTransformation ball_quadrant_map();
SimplicialComplex ball_quadrant_mesh();

PhysicalProblem annulus_physical_problem();
ScalarField annulus_exact_physical();

PhysicalProblem ball_quadrant_physical_problem();
ScalarField ball_quadrant_exact_physical();

/// A ready-to-run experiment: level-0 parametric mesh, transformation,
/// pulled-back problem, and the parametric exact solution.
struct Experiment {
  std::string name;
  SimplicialComplex mesh;
  CoordinateTransformation map;
  ParametricProblem problem;
  ScalarField exact;  // on the parametric domain
};

/// Names: "anulus" (alias "annulus") and "ball-quadrant".
Experiment make_experiment(const std::string& name);

}  // namespace tfem
