#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "periwave/errors.hpp"
#include "periwave/types.hpp"

namespace periwave {

// Periodizing substitution tau in [-pi, pi] -> [a, b] whose derivative
// vanishes to order N0 at both ends, so the trapezoid sum applied after the
// substitution converges at order N0 - 1/2 on smooth non-periodic integrands.
struct GradedMap {
  double a = 0.0;
  double b = 0.0;
  int N0 = 6;
};

struct MapEval {
  double value;
  double derivative;
};

MapEval graded_map_eval(const GradedMap& map, double tau);

// Quadrature nodes and weights on [a, b]. Graded rules use t_l = -pi +
// 2 pi l / N, l = 1..N, weights (2 pi / N) q'(t_l) rescaled so they sum to
// b - a exactly (the raw trapezoid weights miss the length by ~1e-7 at
// small N, while constants must integrate exactly).
struct SegmentRule {
  std::vector<double> param_nodes;  // t_l in [-pi, pi]
  std::vector<double> mapped;       // q(t_l) in [a, b]
  std::vector<double> weights;
};

SegmentRule make_segment_rule(double a, double b, int N, int N0);

// Plain equispaced rule with midpoint-offset nodes; spectrally accurate for
// periodic analytic integrands, and it avoids placing a node on either
// endpoint (on the full circle this keeps nodes off the branch cut at -1).
SegmentRule make_periodic_rule(double a, double b, int N);

// Fixed left-to-right accumulation so results are bitwise reproducible.
template <class F>
auto integrate_rule(F&& g, const SegmentRule& rule) {
  using V = std::decay_t<decltype(g(rule.mapped[0]))>;
  auto guarded = [&](std::size_t l) -> V {
    try {
      return g(rule.mapped[l]);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw NumericalFailure("integrand failed at node " + std::to_string(l) + ": " + e.what());
    }
  };
  V acc = rule.weights[0] * guarded(0);
  for (std::size_t l = 1; l < rule.mapped.size(); ++l)
    acc += rule.weights[l] * guarded(l);
  return acc;
}

template <class F>
auto integrate_segment(F&& g, double a, double b, int N, int N0) {
  return integrate_rule(std::forward<F>(g), make_segment_rule(a, b, N, N0));
}

}  // namespace periwave
