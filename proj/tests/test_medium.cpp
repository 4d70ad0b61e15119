#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "periwave/errors.hpp"
#include "periwave/medium.hpp"
#include "test_util.hpp"

using namespace periwave;

TEST_CASE("smooth cutoff endpoint values and monotonicity") {
  const double a = 0.1, b = 0.3;
  CHECK(smooth_cutoff(0.0, a, b) == 1.0);
  CHECK(smooth_cutoff(a, a, b) == 1.0);
  CHECK(smooth_cutoff(b, a, b) == 0.0);
  CHECK(smooth_cutoff(0.7, a, b) == 0.0);
  CHECK(smooth_cutoff(0.5 * (a + b), a, b) == doctest::Approx(0.5).epsilon(1e-13));
  double prev = 1.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = a + (b - a) * i / 400.0;
    const double v = smooth_cutoff(t, a, b);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("cutoff matches the integrated quartic kernel") {
  // Independent oracle: the transition is the normalized integral of
  // (s-a)^4 (s-b)^4 from t to b.
  const double a = 0.1, b = 0.3;
  // Scaled to O(1) so the oracle's absolute tolerance is relative here.
  auto kernel = [&](double s) {
    const double p = (s - a) * (s - b) * 25.0;
    return Complex(p * p * p * p, 0.0);
  };
  const double total = testutil::adaptive_simpson(kernel, a, b, 1e-15).real();
  for (double t : {0.12, 0.17, 0.2, 0.26, 0.295}) {
    const double want = testutil::adaptive_simpson(kernel, t, b, 1e-15).real() / total;
    CHECK(smooth_cutoff(t, a, b) == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("cutoff flatness order at both ends") {
  // Kernel has 4-fold zeros at a and b, so 1 - cut(a+s) and cut(b-s) are
  // both O(s^5).
  // Small offsets keep the next Taylor term (relative size ~10s/3(b-a))
  // from biasing the fitted exponent, while 1 - cut stays well above the
  // 1e-16 cancellation floor.
  const double a = 0.1, b = 0.3;
  std::vector<double> inv_s, lo, hi;
  for (double s : {0.008, 0.004, 0.002, 0.001}) {
    inv_s.push_back(1.0 / s);
    lo.push_back(1.0 - smooth_cutoff(a + s, a, b));
    hi.push_back(smooth_cutoff(b - s, a, b));
  }
  CHECK(testutil::regression_order(inv_s, lo) >= 4.8);
  CHECK(testutil::regression_order(inv_s, hi) >= 4.8);
}

TEST_CASE("ring problem field values") {
  const CellProblem prob = make_ring_problem();
  CHECK(prob.q_min > 0.0);

  // Center of the ring: inside radius 0.1 -> q = 9, f follows the profile.
  CHECK(prob.q(0.0, 0.5) == doctest::Approx(9.0));
  CHECK(prob.q(0.05, 0.45) == doctest::Approx(9.0));
  // Outside radius 0.3.
  CHECK(prob.q(0.4, 0.5) == doctest::Approx(1.0));
  CHECK(prob.q(0.0, 0.05) == doctest::Approx(1.0));
  CHECK(prob.q(-0.45, 0.9) == doctest::Approx(1.0));
  // Annulus: strictly between.
  const double mid = prob.q(0.2, 0.5);
  CHECK(mid > 1.0);
  CHECK(mid < 9.0);

  // f = 3 cos(2 pi x1) sin(2 pi x2) * profile.
  const double x1 = 0.1, x2 = 0.55;
  const double rho = std::hypot(x1, x2 - 0.5);
  const double prof = smooth_cutoff(rho, 0.1, 0.3);
  const Complex f = prob.f(x1, x2);
  CHECK(f.imag() == 0.0);
  CHECK(f.real() == doctest::Approx(3.0 * std::cos(2.0 * kPi * x1) *
                                    std::sin(2.0 * kPi * x2) * prof).epsilon(1e-13));
  CHECK(std::abs(prob.f(0.35, 0.9)) == 0.0);

  // q - 1 = 8 * profile everywhere.
  for (double r : {0.05, 0.15, 0.22, 0.31}) {
    CHECK(prob.q(r, 0.5) == doctest::Approx(1.0 + 8.0 * smooth_cutoff(r, 0.1, 0.3)).epsilon(1e-13));
  }
}

TEST_CASE("homogeneous and expression problems") {
  const CellProblem hom = make_homogeneous_problem(
      [](double x1, double x2) { return Complex(x1 * x2, 0.0); });
  CHECK(hom.q(0.3, 0.8) == doctest::Approx(1.0));
  CHECK(hom.q_min == doctest::Approx(1.0));

  const CellProblem ex = make_expression_problem("1 + x2", "sin(x1)");
  CHECK(ex.q(0.0, 0.5) == doctest::Approx(1.5));
  CHECK(ex.f(0.25, 0.0).real() == doctest::Approx(std::sin(0.25)));
  CHECK(ex.q_min > 0.0);
  CHECK(ex.q_min <= 1.0 + 1e-12);

  CHECK_THROWS_AS(make_expression_problem("x2 - 0.5", "1"), InvalidParameter);
  CHECK_THROWS_AS(make_expression_problem("0", "1"), InvalidParameter);
}
