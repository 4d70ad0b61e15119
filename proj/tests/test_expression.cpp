#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "periwave/errors.hpp"
#include "periwave/expression.hpp"

using namespace periwave;

TEST_CASE("literals and arithmetic") {
  CHECK(Expression("3").eval(0, 0) == doctest::Approx(3.0));
  CHECK(Expression("2.5e-1").eval(0, 0) == doctest::Approx(0.25));
  CHECK(Expression("1 + 2 * 3").eval(0, 0) == doctest::Approx(7.0));
  CHECK(Expression("(1 + 2) * 3").eval(0, 0) == doctest::Approx(9.0));
  CHECK(Expression("7 / 2 - 1").eval(0, 0) == doctest::Approx(2.5));
  CHECK(Expression("2 - 3 - 4").eval(0, 0) == doctest::Approx(-5.0));
  CHECK(Expression("16 / 4 / 2").eval(0, 0) == doctest::Approx(2.0));
  CHECK(Expression("-x1").eval(2.0, 0) == doctest::Approx(-2.0));
  CHECK(Expression("--3").eval(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("variables and functions") {
  Expression e("sin(x1) * cos(x2) + exp(-x1) + sqrt(abs(x2))");
  const double x1 = 0.37, x2 = -1.2;
  const double want =
      std::sin(x1) * std::cos(x2) + std::exp(-x1) + std::sqrt(std::abs(x2));
  CHECK(e.eval(x1, x2) == doctest::Approx(want).epsilon(1e-15));
  CHECK(e.text() == "sin(x1) * cos(x2) + exp(-x1) + sqrt(abs(x2))");
}

TEST_CASE("nesting") {
  Expression e("1 / (1.1 - cos(2 * 3.14159265358979 * x1))");
  CHECK(e.eval(0.25, 0.0) ==
        doctest::Approx(1.0 / (1.1 - std::cos(0.5 * 3.14159265358979))).epsilon(1e-12));
}

TEST_CASE("parse errors carry position info") {
  CHECK_THROWS_AS(Expression(""), InvalidParameter);
  CHECK_THROWS_AS(Expression("1 +"), InvalidParameter);
  CHECK_THROWS_AS(Expression("x3"), InvalidParameter);
  CHECK_THROWS_AS(Expression("sin 1"), InvalidParameter);
  CHECK_THROWS_AS(Expression("(1 + 2"), InvalidParameter);
  CHECK_THROWS_AS(Expression("1 2"), InvalidParameter);
  CHECK_THROWS_AS(Expression("foo(1)"), InvalidParameter);
  try {
    Expression("1 + * 2");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("moved-from expression transfers ownership") {
  Expression a("x1 + 1");
  Expression b = std::move(a);
  CHECK(b.eval(1.0, 0.0) == doctest::Approx(2.0));
}
