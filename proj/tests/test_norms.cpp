#include "norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "common.hpp"
#include "doctest.h"

using namespace anisym;

namespace {

StepProfile indicator(double measure) {
  return StepProfile::constant(1.0, measure);
}

StepProfile random_decreasing_profile(std::mt19937_64& rng, double measure) {
  std::uniform_int_distribution<int> pieces(3, 10);
  std::uniform_real_distribution<double> vals(0.1, 3.0);
  const int k = pieces(rng);
  std::vector<double> v(k);
  for (auto& x : v) x = vals(rng);
  std::sort(v.begin(), v.end(), std::greater<double>());
  std::vector<double> edges(k + 1, 0.0);
  std::uniform_real_distribution<double> cuts(0.05, 1.0);
  double total = 0.0;
  std::vector<double> widths(k);
  for (auto& w : widths) {
    w = cuts(rng);
    total += w;
  }
  for (int i = 0; i < k; ++i) {
    edges[i + 1] = edges[i] + widths[i] / total * measure;
  }
  edges.back() = measure;
  return StepProfile(edges, v);
}

}  // namespace

TEST_CASE("Lorentz norm closed forms") {
  // indicator, p = 2, q = 1: int_0^1 s^{-1/2} ds = 2
  CHECK(lorentz_norm(indicator(1.0), 2, 1) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // L^{1,1} is L^1
  const StepProfile two_steps({0, 1, 2}, {3, 1});
  CHECK(lorentz_norm(two_steps, 1, 1) == doctest::Approx(4.0).epsilon(1e-12));

  // L^{p,p} is L^p
  const StepProfile f({0, 1, 3}, {2, 1});
  CHECK(lorentz_norm(f, 2, 2) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));

  // q = inf: sup s^{1/3} f*(s), attained at piece right edges
  const StepProfile g({0, 8}, {2});
  CHECK(lorentz_norm(g, 3, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(4.0).epsilon(1e-12));

  // general indicator: (p/q)^{1/q} m^{1/p}
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pd(1.1, 5.0), md(0.2, 9.0);
  for (int t = 0; t < 10; ++t) {
    const double p = pd(rng), q = pd(rng), m = md(rng);
    const double expect = std::pow(p / q, 1.0 / q) * std::pow(m, 1.0 / p);
    CHECK(lorentz_norm(indicator(m), p, q) ==
          doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("Lorentz norm degenerate combinations") {
  const double inf = std::numeric_limits<double>::infinity();
  // p = inf with finite q diverges for nontrivial profiles
  CHECK(std::isinf(lorentz_norm(indicator(1.0), inf, 2)));
  // p = inf, q = inf is the sup norm
  const StepProfile f({0, 1, 2}, {5, 1});
  CHECK(lorentz_norm(f, inf, inf) == doctest::Approx(5.0).epsilon(1e-12));
  // input not sorted: rearranged first
  const StepProfile unsorted({0, 1, 2}, {1, 3});
  const StepProfile sorted_({0, 1, 2}, {3, 1});
  CHECK(lorentz_norm(unsorted, 2.5, 1.5) ==
        doctest::Approx(lorentz_norm(sorted_, 2.5, 1.5)).epsilon(1e-12));
}

TEST_CASE("Lorentz-Zygmund norms with exactly integrable weights") {
  const double inf = std::numeric_limits<double>::infinity();
  // (inf, 1, -2), indicator on (0,1]: substituting w = 1 + log(1/s) gives
  // int_1^inf w^{-2} dw = 1
  CHECK(lorentz_zygmund_norm(indicator(1.0), inf, 1, -2) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // (inf, 2, -1): int_1^inf w^{-2} dw = 1, norm = 1
  CHECK(lorentz_zygmund_norm(indicator(1.0), inf, 2, -1) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // iterated log factor: [s^0 (1+L)^{-1/2} (1+log(1+L))^{-1}]^2 /s ds -> 1
  CHECK(lorentz_zygmund_norm(indicator(1.0), inf, 2, -0.5, -1.0) ==
        doctest::Approx(1.0).epsilon(1e-8));
  // alpha = 0 reduces to the Lorentz norm
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_decreasing_profile(rng, 2.0);
    CHECK(lorentz_zygmund_norm(f, 2.5, 1.5, 0.0) ==
          doctest::Approx(lorentz_norm(f, 2.5, 1.5)).epsilon(1e-9));
  }
  // nontriviality guard: p = inf requires alpha + 1/q < 0
  CHECK(std::isinf(lorentz_zygmund_norm(indicator(1.0), inf, 2, -0.25)));
}

TEST_CASE("Luxemburg norm closed forms") {
  // A = s^2, f = 1 on (0,4]: lambda = 2
  CHECK(luxemburg_norm(StepProfile::constant(1.0, 4.0),
                       OneDimYoung::power(1.0, 2.0)) ==
        doctest::Approx(2.0).epsilon(1e-10));
  // A = s^p, f = c on (0,m]: lambda = c m^{1/p}
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pd(1.2, 4.0), cd(0.3, 5.0);
  for (int t = 0; t < 8; ++t) {
    const double p = pd(rng), c = cd(rng), m = cd(rng);
    CHECK(luxemburg_norm(StepProfile::constant(c, m),
                         OneDimYoung::power(1.0, p)) ==
          doctest::Approx(c * std::pow(m, 1.0 / p)).epsilon(1e-9));
  }
  // zero profile
  CHECK(luxemburg_norm(StepProfile::constant(0.0, 1.0),
                       OneDimYoung::power(1.0, 2.0)) == 0.0);
}

TEST_CASE("Orlicz-Lorentz generator for sub-dimensional powers") {
  // A = s^q, N = 2, q < 2: B(sigma) = (2-q)^{2(q-1)} sigma^q exactly
  const double q = 1.5;
  const auto B = orlicz_lorentz_generator(OneDimYoung::power(1.0, q), 2);
  const double factor = std::pow(2.0 - q, 2.0 * (q - 1.0));
  for (double sigma : {0.2, 1.0, 5.0}) {
    CHECK(B.eval(sigma) ==
          doctest::Approx(factor * std::pow(sigma, q)).epsilon(0.015));
  }
}

TEST_CASE("Orlicz-Lorentz norm of the indicator against the Lorentz target") {
  // A = s^{3/2}, N = 2: X-norm of the indicator of (0,1] is 2^{2/3} and the
  // ratio to the L^{6,3/2} norm is (1/2)^{2/3}
  const auto a = OneDimYoung::power(1.0, 1.5);
  const double x = orlicz_lorentz_norm(indicator(1.0), a, 2);
  CHECK(x == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(0.02));
  const double lorentz = lorentz_norm(indicator(1.0), 6.0, 1.5);
  CHECK(x / lorentz ==
        doctest::Approx(std::pow(0.5, 2.0 / 3.0)).epsilon(0.03));
}

TEST_CASE("Orlicz-Lorentz norm at the critical power requires renormalization") {
  const auto a = OneDimYoung::power(1.0, 2.0);
  CHECK_THROWS_AS(orlicz_lorentz_norm(indicator(1.0), a, 2), ValidationError);
  const double x =
      orlicz_lorentz_norm(indicator(1.0), a, 2, /*normalize_at_zero=*/true);
  CHECK(std::isfinite(x));
  CHECK(x > 0.0);
  // two-sided comparison with the borderline Lorentz-Zygmund target
  const double inf = std::numeric_limits<double>::infinity();
  const double lz = lorentz_zygmund_norm(indicator(1.0), inf, 2, -1);
  CHECK(x / lz >= 0.25);
  CHECK(x / lz <= 4.0);
}

TEST_CASE("Hardy pair closed form for the indicator") {
  const auto psi_prof = indicator(1.0);
  const auto report = hardy_check(psi_prof, 0.5, 1.0);
  CHECK(report.lhs_down == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(report.rhs_down == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(report.lhs_up == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(report.rhs_up == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(report.ratio_down() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Hardy pair with piecewise data away from zero") {
  // psi = 0 on (0,1], 2 on (1,3]; r = 1, q = 2
  const StepProfile psi_prof({0, 1, 3}, {0, 2});
  const auto report = hardy_check(psi_prof, 1.0, 2.0);
  const double lhs_sq =
      4.0 * (std::log(3.0) + 2.0 / 3.0 - 1.0 / 18.0 - 1.5) + 8.0 / 9.0;
  CHECK(report.lhs_down == doctest::Approx(std::sqrt(lhs_sq)).epsilon(1e-6));
  CHECK(report.rhs_down ==
        doctest::Approx(2.0 * std::sqrt(std::log(3.0))).epsilon(1e-10));
  CHECK(std::isfinite(report.lhs_up));
  CHECK(std::isfinite(report.rhs_up));
}

TEST_CASE("Hardy monotonicity requirement for q below one") {
  const StepProfile non_monotone({0, 1, 2, 3}, {1, 3, 2});
  CHECK_THROWS_AS(hardy_check(non_monotone, 0.5, 0.5), ValidationError);
  const StepProfile monotone({0, 1, 2}, {3, 1});
  const auto report = hardy_check(monotone, 1.0 / 3.0, 0.5);
  CHECK(std::isfinite(report.lhs_down));
  CHECK(std::isfinite(report.rhs_down));
}

TEST_CASE("weighted Luxemburg norm used by the Orlicz-Lorentz functional") {
  // || s^{-1/4} * 1 ||_{L^{s^3}} on (0,1]:
  //   int_0^1 (s^{-1/4}/t)^3 ds = (1/t^3) int_0^1 s^{-3/4} ds = 4/t^3 <= 1
  // gives t = 4^{1/3}
  const auto a = OneDimYoung::power(1.0, 3.0);
  const double t = luxemburg_norm_weighted(
      indicator(1.0), [](double s) { return std::pow(s, -0.25); }, a);
  CHECK(t == doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-8));
}
