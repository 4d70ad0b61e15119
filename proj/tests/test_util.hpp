#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "periwave/types.hpp"

namespace testutil {

// Adaptive Simpson quadrature, the independent oracle for the graded rule.
// Complex-valued; tolerance is absolute.
inline periwave::Complex simpson_step(const std::function<periwave::Complex(double)>& f, double a,
                                      double b, periwave::Complex fa, periwave::Complex fb,
                                      periwave::Complex fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const periwave::Complex flm = f(lm);
  const periwave::Complex frm = f(rm);
  const periwave::Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const periwave::Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const periwave::Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const periwave::Complex delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, fm, flm, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, fb, frm, 0.5 * tol, depth - 1);
}

inline periwave::Complex adaptive_simpson(const std::function<periwave::Complex(double)>& f,
                                          double a, double b, double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  return simpson_step(f, a, b, f(a), f(b), f(m), tol, 60);
}

// Least-squares slope of log(err) against log(n): observed convergence order
// is -slope for errors decaying like n^{-p}.
inline double regression_order(const std::vector<double>& ns, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace testutil
