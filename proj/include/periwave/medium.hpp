#pragma once

#include <functional>
#include <string>

#include "periwave/types.hpp"

namespace periwave {

using ScalarField = std::function<double(double, double)>;
using ComplexField = std::function<Complex(double, double)>;

// Smooth transition: 1 for t <= a, 0 for t >= b, in between the normalized
// integral of the quartic bump (s-a)^4 (s-b)^4 (four vanishing derivatives
// at both ends). Closed form; no numerical integration involved.
double smooth_cutoff(double t, double a, double b);

// Scattering problem on one periodicity cell: refractive index q bounded
// below by q_min > 0, and a compactly supported cell source f.
struct CellProblem {
  ScalarField q;
  ComplexField f;
  double q_min = 1.0;
  std::string name;
};

// Built-in ring medium: q = 9 inside radius 0.1 of (0, 0.5), q = 1 outside
// radius 0.3, smooth in the annulus; f = 3 cos(2 pi x1) sin(2 pi x2) times
// the same radial profile (so f vanishes outside the 0.3 ball).
double ring_profile(double x1, double x2);
CellProblem make_ring_problem();

// Homogeneous medium q = 1 with a user-chosen source; analytic dispersion.
CellProblem make_homogeneous_problem(ComplexField f);

// q and f given as closed-form expressions in x1, x2.
CellProblem make_expression_problem(const std::string& q_expr, const std::string& f_expr);

}  // namespace periwave
