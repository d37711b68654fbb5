#include "barrier.hpp"

#include <cmath>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "young.hpp"

using namespace anisym;

namespace {

BarrierSpec torsion_disk() {
  // phi(s) = s^2 on the unit disk, f = 1, no divergence datum.
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(1.0, 2.0);
  spec.dim = 2;
  spec.f_star = StepProfile::constant(1.0, kPi);
  spec.g_profile = StepProfile::constant(0.0, kPi);
  return spec;
}

}  // namespace

TEST_CASE("constant-source quadratic barrier on the unit disk") {
  const auto spec = torsion_disk();

  // flux: F(r) = sqrt(r) / (2 sqrt(pi))
  CHECK(barrier_flux(spec, kPi / 4.0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(barrier_flux(spec, kPi) == doctest::Approx(0.5).epsilon(1e-10));

  // solution: v = (1 - |x|^2)/4
  const auto v = barrier_solution(spec);
  CHECK(v.eval_measure(0.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(v.eval_radius(0.6) == doctest::Approx(0.16).epsilon(1e-8));
  CHECK(v.eval_radius(1.0) == doctest::Approx(0.0).epsilon(1e-12));

  // gradient energy: int_0^pi r/(4 pi) dr = pi/8
  CHECK(barrier_gradient_energy(spec) ==
        doctest::Approx(kPi / 8.0).epsilon(1e-9));

  const auto wp = barrier_wellposed(spec);
  CHECK(wp.psi_range_unbounded);
  CHECK(wp.gradient_energy_finite);
  CHECK(wp.data_admissible);
  CHECK(wp.ok());
}

TEST_CASE("pure divergence datum gives a cone profile") {
  // f = 0, G = 0.5 constant: F = 2 sqrt(0.5) and v = 2 sqrt(0.5) (1 - |x|)
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(1.0, 2.0);
  spec.dim = 2;
  spec.f_star = StepProfile::constant(0.0, kPi);
  spec.g_profile = StepProfile::constant(0.5, kPi);

  const double amp = 2.0 * std::sqrt(0.5);
  CHECK(barrier_flux(spec, 1.0) == doctest::Approx(amp).epsilon(1e-10));

  const auto v = barrier_solution(spec);
  CHECK(v.eval_measure(0.0) == doctest::Approx(amp).epsilon(1e-6));
  CHECK(v.eval_radius(0.5) == doctest::Approx(amp * 0.5).epsilon(1e-6));

  // energy: int_0^pi (2 sqrt(G0))^2 dr = 4 G0 pi = 2 pi
  CHECK(barrier_gradient_energy(spec) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-9));
}

TEST_CASE("barrier scales linearly in the datum for quadratic growth") {
  auto spec = torsion_disk();
  const auto base = barrier_solution(spec, 512);
  spec.f_star = spec.f_star.scaled(3.5);
  const auto scaled = barrier_solution(spec, 512);
  for (double s : {0.1, 1.0, 2.5}) {
    CHECK(scaled.eval_measure(s) ==
          doctest::Approx(3.5 * base.eval_measure(s)).epsilon(1e-9));
  }
}

TEST_CASE("barrier homogeneity for cubic growth") {
  // phi = s^3: scaling the source by 8 scales the solution by 8^{1/2}
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(1.0, 3.0);
  spec.dim = 2;
  spec.f_star = StepProfile::constant(1.0, kPi);
  spec.g_profile = StepProfile::constant(0.0, kPi);

  const auto base = barrier_solution(spec, 512);
  spec.f_star = spec.f_star.scaled(8.0);
  const auto scaled = barrier_solution(spec, 512);
  const double factor = std::sqrt(8.0);
  for (double s : {0.2, 1.0, 3.0}) {
    CHECK(scaled.eval_measure(s) ==
          doctest::Approx(factor * base.eval_measure(s)).epsilon(1e-9));
  }
}

TEST_CASE("unit-measure domain with a weighted quadratic profile") {
  // phi = 6 s^2 (the reduced function of a weighted quadratic sum),
  // |Omega| = 1, f = 1:
  //   v(0) = int_0^1 f**(r) dr / (4 pi Lambda) = 1 / (24 pi).
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(6.0, 2.0);
  spec.dim = 2;
  spec.f_star = StepProfile::constant(1.0, 1.0);
  spec.g_profile = StepProfile::constant(0.0, 1.0);
  const auto v = barrier_solution(spec);
  CHECK(v.eval_measure(0.0) ==
        doctest::Approx(1.0 / (24.0 * kPi)).epsilon(1e-8));
}

TEST_CASE("piecewise source crosses the running-average computation") {
  // f* = 2 on (0,1/2], 1 on (1/2,1]; |Omega| = 1, phi = s^2:
  //   v(0) = (1/4pi) int_0^1 f**(r) dr = (1.5 + 0.5 log 2) / (4 pi).
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(1.0, 2.0);
  spec.dim = 2;
  spec.f_star = StepProfile({0.0, 0.5, 1.0}, {2.0, 1.0});
  spec.g_profile = StepProfile::constant(0.0, 1.0);
  const auto v = barrier_solution(spec);
  const double expect = (1.5 + 0.5 * std::log(2.0)) / (4.0 * kPi);
  CHECK(expect == doctest::Approx(0.14694565733800297).epsilon(1e-6));
  CHECK(v.eval_measure(0.0) == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("asymptotically linear growth limits the admissible data") {
  // phi(s) = s^2/(1+s): Psi(s) = s/(1+s) has sup 1, so the radial problem
  // is solvable only when the datum stays below 1.
  const auto phi = OneDimYoung::from_function(
      [](double s) { return s * s / (1.0 + s); }, 1e-6, 1e6, 1024);

  BarrierSpec bad;
  bad.phi = phi;
  bad.dim = 2;
  bad.f_star = StepProfile::constant(4.0, kPi);
  bad.g_profile = StepProfile::constant(0.0, kPi);
  const auto wp_bad = barrier_wellposed(bad);
  CHECK_FALSE(wp_bad.psi_range_unbounded);
  CHECK_FALSE(wp_bad.pointwise_range_ok);
  CHECK_FALSE(wp_bad.ok());
  CHECK_THROWS_AS(barrier_solution(bad), NumericalError);

  BarrierSpec good = bad;
  good.f_star = StepProfile::constant(0.1, kPi);
  const auto wp_good = barrier_wellposed(good);
  CHECK_FALSE(wp_good.psi_range_unbounded);
  CHECK(wp_good.pointwise_range_ok);
  CHECK(wp_good.worst_range_margin > 0.0);
  CHECK(wp_good.ok());
  const auto v = barrier_solution(good);
  CHECK(std::isfinite(v.max_value()));
  CHECK(v.max_value() > 0.0);
}

TEST_CASE("sampled flux profile agrees with pointwise flux evaluation") {
  BarrierSpec spec;
  spec.phi = OneDimYoung::power(2.0, 2.5);
  spec.dim = 2;
  spec.f_star = StepProfile({0.0, 1.0, 2.0, kPi}, {3.0, 1.5, 0.5});
  spec.g_profile = StepProfile({0.0, 2.0, kPi}, {0.25, 0.1});
  const auto profile = barrier_flux_profile(spec, 24);
  CHECK(profile.measure() == doctest::Approx(kPi).epsilon(1e-12));
  const auto& edges = profile.edges();
  for (std::size_t k = 0; k + 1 < edges.size(); k += 7) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    CHECK(profile.eval(mid) ==
          doctest::Approx(barrier_flux(spec, mid)).epsilon(0.02));
  }
}

TEST_CASE("solution slope reproduces the flux") {
  // |grad v|(x) = F(omega_N |x|^N): check by a centred difference in the
  // radius at interior points.
  const auto spec = torsion_disk();
  const auto v = barrier_solution(spec, 4096);
  const double dr = 1e-5;
  for (double rho : {0.2, 0.5, 0.8}) {
    const double slope =
        (v.eval_radius(rho - dr) - v.eval_radius(rho + dr)) / (2.0 * dr);
    const double flux = barrier_flux(spec, kPi * rho * rho);
    CHECK(slope == doctest::Approx(flux).epsilon(0.01));
  }
}
