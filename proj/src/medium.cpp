#include "periwave/medium.hpp"

#include <cmath>
#include <memory>

#include "periwave/errors.hpp"
#include "periwave/expression.hpp"

namespace periwave {

double smooth_cutoff(double t, double a, double b) {
  if (!(b > a))
    throw InvalidParameter("smooth_cutoff needs a < b");
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  const double c = b - a;
  const double u = t - a;
  // P(u) = int_0^u s^4 (s-c)^4 ds, with P(c) = c^9 / 630.
  const double p = std::pow(c, 4) * std::pow(u, 5) / 5.0 -
                   (2.0 / 3.0) * std::pow(c, 3) * std::pow(u, 6) +
                   (6.0 / 7.0) * c * c * std::pow(u, 7) -
                   0.5 * c * std::pow(u, 8) + std::pow(u, 9) / 9.0;
  return 1.0 - p / (std::pow(c, 9) / 630.0);
}

double ring_profile(double x1, double x2) {
  const double rho = std::hypot(x1 - 0.0, x2 - 0.5);
  return smooth_cutoff(rho, 0.1, 0.3);
}

CellProblem make_ring_problem() {
  CellProblem p;
  p.q = [](double x1, double x2) { return 1.0 + 8.0 * ring_profile(x1, x2); };
  p.f = [](double x1, double x2) -> Complex {
    return 3.0 * std::cos(2.0 * kPi * x1) * std::sin(2.0 * kPi * x2) * ring_profile(x1, x2);
  };
  p.q_min = 1.0;
  p.name = "ring";
  return p;
}

CellProblem make_homogeneous_problem(ComplexField f) {
  CellProblem p;
  p.q = [](double, double) { return 1.0; };
  // empty callable means no source
  p.f = f ? std::move(f) : [](double, double) { return Complex(0.0, 0.0); };
  p.q_min = 1.0;
  p.name = "homogeneous";
  return p;
}

CellProblem make_expression_problem(const std::string& q_expr, const std::string& f_expr) {
  auto q = std::make_shared<Expression>(q_expr);
  auto f = std::make_shared<Expression>(f_expr);
  // Probe a coarse grid for a positive lower bound on q.
  double qmin = 1e300;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j)
      qmin = std::min(qmin, q->eval(-0.5 + i / 40.0, j / 40.0));
  if (!(qmin > 0.0))
    throw InvalidParameter("expression-defined q must be positive on the cell");
  CellProblem p;
  p.q = [q](double x1, double x2) { return q->eval(x1, x2); };
  p.f = [f](double x1, double x2) -> Complex { return f->eval(x1, x2); };
  p.q_min = qmin;
  p.name = "expression";
  return p;
}

}  // namespace periwave
