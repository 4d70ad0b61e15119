#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "periwave/errors.hpp"
#include "periwave/quadrature.hpp"
#include "test_util.hpp"

using namespace periwave;
using testutil::adaptive_simpson;
using testutil::regression_order;

TEST_CASE("graded map endpoint values and derivative") {
  const GradedMap map{0.25, 2.0, 6};
  const MapEval lo = graded_map_eval(map, -kPi);
  const MapEval hi = graded_map_eval(map, kPi);
  CHECK(lo.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(lo.derivative == 0.0);
  CHECK(hi.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hi.derivative == 0.0);

  const MapEval mid = graded_map_eval(map, 0.0);
  CHECK(mid.value == doctest::Approx(0.5 * (0.25 + 2.0)).epsilon(1e-14));
  for (double t : {-2.0, -1.0, 0.5, 2.5}) {
    CHECK(graded_map_eval(map, t).derivative <= mid.derivative);
  }
}

TEST_CASE("graded map is strictly increasing") {
  const GradedMap map{-1.0, 3.0, 6};
  double prev = graded_map_eval(map, -kPi).value;
  for (int i = 1; i <= 1000; ++i) {
    const double t = -kPi + 2.0 * kPi * i / 1000.0;
    const double v = graded_map_eval(map, t).value;
    CHECK(v >= prev);
    // Order-7 endpoint flatness drops below double resolution near +-pi;
    // strict growth is only observable away from the ends.
    if (std::abs(t) < kPi - 0.1) CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(graded_map_eval(map, kPi + 1e-9), InvalidParameter);
  CHECK_THROWS_AS(graded_map_eval(map, -kPi - 1e-9), InvalidParameter);
}

TEST_CASE("graded map endpoint flatness to order N0") {
  // Derivatives 1..N0 vanishing at +-pi is equivalent to the Taylor
  // remainder |q(pi - s) - b| = O(s^{N0+1}); probe the decay exponent.
  const int order = 6;
  const GradedMap map{0.0, 1.0, order};
  std::vector<double> ss = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> inv_s, gap_hi, gap_lo;
  for (double s : ss) {
    inv_s.push_back(1.0 / s);
    gap_hi.push_back(1.0 - graded_map_eval(map, kPi - s).value);
    gap_lo.push_back(graded_map_eval(map, -kPi + s).value);
  }
  CHECK(regression_order(inv_s, gap_hi) >= order + 1 - 0.1);
  CHECK(regression_order(inv_s, gap_lo) >= order + 1 - 0.1);
}

TEST_CASE("segment rule nodes and weights") {
  const SegmentRule rule = make_segment_rule(0.5, 2.5, 32, 6);
  REQUIRE(rule.mapped.size() == 32);
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
  for (std::size_t i = 1; i < rule.mapped.size(); ++i) CHECK(rule.mapped[i] >= rule.mapped[i - 1]);
  // l runs 1..N, so the first node is strictly inside and the last lands on
  // b with zero weight.
  for (double m : rule.mapped) {
    CHECK(m > 0.5);
    CHECK(m <= 2.5);
  }
  CHECK(rule.mapped.back() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(rule.weights.back() == 0.0);

  // Signed interval: weights sum to the signed length.
  const SegmentRule back = make_segment_rule(2.5, 0.5, 16, 6);
  double back_sum = 0.0;
  for (double w : back.weights) back_sum += w;
  CHECK(back_sum == doctest::Approx(-2.0).epsilon(1e-13));

  CHECK_THROWS_AS(make_segment_rule(0.0, 1.0, 7, 6), InvalidParameter);
  CHECK_THROWS_AS(make_segment_rule(0.0, 1.0, 2, 6), InvalidParameter);
}

TEST_CASE("constants integrate exactly") {
  const Complex c(1.25, -0.5);
  const Complex got = integrate_segment([&](double) { return c; }, -0.3, 1.1, 24, 6);
  CHECK(std::abs(got - c * 1.4) <= 1e-14);
}

TEST_CASE("plain periodic rule annihilates e^{it} and is spectral") {
  const SegmentRule rule = make_periodic_rule(-kPi, kPi, 16);
  const Complex zero = integrate_rule([](double t) { return std::exp(Complex(0.0, t)); }, rule);
  CHECK(std::abs(zero) <= 1e-14);

  // Periodic analytic integrand: geometric decay with N under the plain rule.
  auto g = [](double t) { return Complex(std::exp(std::cos(t)), 0.0); };
  const Complex ref = adaptive_simpson([&](double t) { return g(t); }, -kPi, kPi, 1e-14);
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    const Complex got = integrate_rule(g, make_periodic_rule(-kPi, kPi, n));
    errs.push_back(std::abs(got - ref));
  }
  CHECK(errs[1] <= 1e-3 * errs[0]);
  CHECK(errs[2] <= 1e-13);
}

TEST_CASE("linearity of the rule") {
  const SegmentRule rule = make_segment_rule(0.0, 1.0, 16, 6);
  auto g1 = [](double t) { return Complex(std::sin(3.0 * t), t); };
  auto g2 = [](double t) { return Complex(std::exp(-t), std::cos(t)); };
  const Complex a(0.7, -1.3);
  const Complex lhs = integrate_rule([&](double t) { return a * g1(t) + g2(t); }, rule);
  const Complex rhs = a * integrate_rule(g1, rule) + integrate_rule(g2, rule);
  CHECK(std::abs(lhs - rhs) <= 1e-13);
}

TEST_CASE("graded rule order on a smooth non-periodic integrand") {
  auto g = [](double t) { return Complex(1.0 / (1.1 - std::cos(t)), 0.0); };
  const Complex ref = adaptive_simpson([&](double t) { return g(t); }, 0.0, 0.5 * kPi, 1e-13);
  std::vector<double> ns, errs;
  for (int n : {16, 32, 64, 128}) {
    const Complex got = integrate_segment(g, 0.0, 0.5 * kPi, n, 6);
    ns.push_back(n);
    errs.push_back(std::abs(got - ref));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
  CHECK(regression_order(ns, errs) >= 5.5);
}

TEST_CASE("second smooth integrand keeps the theoretical order") {
  auto g = [](double t) { return Complex(std::exp(t) * std::cos(2.0 * t), std::sin(t) + t * t); };
  const Complex ref = adaptive_simpson([&](double t) { return g(t); }, -0.4, 1.3, 1e-13);
  std::vector<double> ns, errs;
  for (int n : {16, 32, 64, 128}) {
    const Complex got = integrate_segment(g, -0.4, 1.3, n, 6);
    ns.push_back(n);
    errs.push_back(std::abs(got - ref));
  }
  CHECK(regression_order(ns, errs) >= 5.5);
}

TEST_CASE("integrand failures carry the node index") {
  const SegmentRule rule = make_segment_rule(0.0, 1.0, 8, 6);
  auto bad = [](double t) -> Complex {
    if (t > 0.5) throw std::runtime_error("synthetic failure");
    return Complex(t, 0.0);
  };
  CHECK_THROWS_AS(integrate_rule(bad, rule), NumericalFailure);
  try {
    integrate_rule(bad, rule);
  } catch (const NumericalFailure& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}
