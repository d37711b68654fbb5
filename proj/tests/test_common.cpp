#include "common.hpp"

#include <cmath>

#include "doctest.h"

using namespace anisym;

TEST_CASE("unit ball volumes in low dimensions") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("exact power-piece integrals") {
  // int_1^e 2/s ds = 2
  CHECK(integrate_power(2.0, -1.0, 1.0, std::exp(1.0)) ==
        doctest::Approx(2.0).epsilon(1e-13));
  // int_0^1 s^{-1/2} ds = 2
  CHECK(integrate_power(1.0, -0.5, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-13));
  // int_1^2 3 s^2 ds = 7
  CHECK(integrate_power(3.0, 2.0, 1.0, 2.0) ==
        doctest::Approx(7.0).epsilon(1e-13));
  // divergent at zero
  CHECK(std::isinf(integrate_power(1.0, -1.0, 0.0, 1.0)));
  CHECK(std::isinf(integrate_power(1.0, -1.5, 0.0, 1.0)));
}

TEST_CASE("adaptive quadrature on smooth integrands") {
  const double s1 =
      integrate_adaptive([](double t) { return std::sin(t); }, 0.0, kPi);
  CHECK(s1 == doctest::Approx(2.0).epsilon(1e-9));
  const double s2 =
      integrate_adaptive([](double t) { return std::exp(-t); }, 0.0, 20.0);
  CHECK(s2 == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-9));
}

TEST_CASE("monotone bisection and concave maximisation") {
  const double root = solve_increasing([](double s) { return s * s * s; }, 8.0,
                                       0.0, 10.0);
  CHECK(root == doctest::Approx(2.0).epsilon(1e-9));

  const double arg = maximize_concave(
      [](double s) { return -(s - 1.5) * (s - 1.5); }, 0.0, 10.0);
  CHECK(arg == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == UINT64_C(0xcbf29ce484222325));
  CHECK(fnv1a64("a") == UINT64_C(0xaf63dc4c8601ec8c));
  CHECK(fnv1a64("foobar") == UINT64_C(0x85944171f73967e8));
}

TEST_CASE("nearly_equal semantics") {
  CHECK(nearly_equal(1.0, 1.0 + 1e-12, 1e-10));
  CHECK_FALSE(nearly_equal(1.0, 1.1, 1e-3));
  CHECK(nearly_equal(0.0, 1e-15, 1e-12, 1e-12));
}
