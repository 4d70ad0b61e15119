#include "periwave/quadrature.hpp"

#include <cmath>

namespace periwave {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

// tail(W) = int_0^W w^N0 (2 - w)^N0 dw, the mass of (1 - v^2)^N0 within
// distance W of the endpoint v = -1. Alternating series with decreasing
// terms for W <= 1, so small masses come out accurate and nonnegative;
// evaluating from the nearer endpoint avoids the cancellation that the
// plain antiderivative suffers near +-1.
double endpoint_mass(int N0, double W) {
  double s = 0.0, sign = 1.0;
  for (int j = 0; j <= N0; ++j) {
    s += sign * binom(N0, j) * std::pow(2.0, N0 - j) * std::pow(W, N0 + j + 1) / (N0 + j + 1);
    sign = -sign;
  }
  return s;
}

}  // namespace

MapEval graded_map_eval(const GradedMap& map, double tau) {
  if (tau < -kPi - 1e-12 || tau > kPi + 1e-12)
    throw InvalidParameter("graded map parameter outside [-pi, pi]");
  if (map.N0 < 1)
    throw InvalidParameter("graded map needs N0 >= 1");
  const double u = std::min(std::max(tau / kPi, -1.0), 1.0);
  const double total = 2.0 * endpoint_mass(map.N0, 1.0);
  const double frac = u <= 0.0 ? endpoint_mass(map.N0, 1.0 + u) / total
                               : 1.0 - endpoint_mass(map.N0, 1.0 - u) / total;
  const double value = map.a + (map.b - map.a) * frac;
  const double deriv = (map.b - map.a) * std::pow(1.0 - u * u, map.N0) / (kPi * total);
  return {value, deriv};
}

SegmentRule make_segment_rule(double a, double b, int N, int N0) {
  if (N < 4 || N % 2 != 0)
    throw InvalidParameter("segment rule needs even N >= 4");
  GradedMap map{a, b, N0};
  SegmentRule rule;
  rule.param_nodes.resize(static_cast<std::size_t>(N));
  rule.mapped.resize(static_cast<std::size_t>(N));
  rule.weights.resize(static_cast<std::size_t>(N));
  double raw_sum = 0.0;
  for (int l = 1; l <= N; ++l) {
    const double t = -kPi + 2.0 * kPi * l / N;
    const auto ev = graded_map_eval(map, t);
    rule.param_nodes[static_cast<std::size_t>(l - 1)] = t;
    rule.mapped[static_cast<std::size_t>(l - 1)] = ev.value;
    rule.weights[static_cast<std::size_t>(l - 1)] = (2.0 * kPi / N) * ev.derivative;
    raw_sum += rule.weights[static_cast<std::size_t>(l - 1)];
  }
  // Rescale so constants integrate exactly; the correction is O(N^-N0).
  if (raw_sum != 0.0) {
    const double scale = (b - a) / raw_sum;
    for (auto& w : rule.weights) w *= scale;
  }
  return rule;
}

SegmentRule make_periodic_rule(double a, double b, int N) {
  if (N < 1)
    throw InvalidParameter("periodic rule needs N >= 1");
  SegmentRule rule;
  rule.param_nodes.resize(static_cast<std::size_t>(N));
  rule.mapped.resize(static_cast<std::size_t>(N));
  rule.weights.assign(static_cast<std::size_t>(N), (b - a) / N);
  for (int l = 0; l < N; ++l) {
    const double frac = (l + 0.5) / N;
    rule.param_nodes[static_cast<std::size_t>(l)] = -kPi + 2.0 * kPi * frac;
    rule.mapped[static_cast<std::size_t>(l)] = a + (b - a) * frac;
  }
  return rule;
}

}  // namespace periwave
