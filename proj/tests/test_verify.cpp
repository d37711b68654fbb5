#include "verify.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "grid.hpp"
#include "pde.hpp"
#include "young.hpp"

using namespace anisym;

namespace {

DiscreteProblem disk_torsion(double h) {
  DiscreteProblem prob;
  prob.domain = make_disk_grid(1.0, h);
  prob.p = {2, 2};
  prob.lambda = {1, 1};
  prob.f = prob.domain;
  fill_grid(prob.f, [](const std::vector<double>&) { return 1.0; });
  return prob;
}

DiscreteProblem square_problem(double h, std::vector<double> p) {
  DiscreteProblem prob;
  prob.domain = make_box_grid({0.0, 0.0}, {1.0, 1.0}, h);
  prob.p = std::move(p);
  prob.lambda = {1, 1};
  prob.f = prob.domain;
  fill_grid(prob.f, [](const std::vector<double>&) { return 1.0; });
  return prob;
}

GridFunction trig_field(const GridFunction& domain, std::mt19937_64& rng,
                        int max_mode) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<double> c;
  for (int j = 1; j <= max_mode; ++j)
    for (int k = 1; k <= max_mode; ++k) c.push_back(coeff(rng));
  GridFunction u = domain;
  fill_grid(u, [&](const std::vector<double>& x) {
    double acc = 0.0;
    std::size_t idx = 0;
    for (int j = 1; j <= max_mode; ++j)
      for (int k = 1; k <= max_mode; ++k)
        acc += c[idx++] * std::sin(j * kPi * x[0]) * std::sin(k * kPi * x[1]);
    return acc;
  });
  return u;
}

}  // namespace

TEST_CASE("rearrangement comparison on the constant-source disk") {
  const auto prob = disk_torsion(1.0 / 32.0);
  SolveOptions sopts;
  sopts.tol = 1e-10;
  const auto sol = solve(prob, sopts);
  REQUIRE(sol.converged);

  ComparisonOptions opts;
  opts.analytic_measure = kPi;
  opts.threshold = 1.12;
  const auto report = comparison_report(prob, sol.u, opts);

  CHECK(report.measure_used == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(report.barrier_max == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(report.empirical_c > 0.9);
  CHECK(report.empirical_c < 1.1);
  CHECK(report.pass);
  CHECK(report.wellposed.ok());

  REQUIRE(!report.rows.empty());
  bool has_guarded = false;
  double prev_s = -1.0, prev_ustar = 1e300;
  for (const auto& row : report.rows) {
    CHECK(row.s > prev_s);
    CHECK(row.u_star <= prev_ustar + 1e-14);
    prev_s = row.s;
    prev_ustar = row.u_star;
    if (row.guarded) has_guarded = true;
  }
  CHECK(has_guarded);  // rows near the boundary fall under the edge guard
}

TEST_CASE("comparison of the zero solution is trivially zero") {
  auto prob = disk_torsion(1.0 / 8.0);
  fill_grid(prob.f, [](const std::vector<double>&) { return 0.0; });
  GridFunction zero = prob.domain;
  const auto report = comparison_report(prob, zero);
  CHECK(report.empirical_c == 0.0);
  CHECK(report.pass);
}

TEST_CASE("gradient-energy estimate on the constant-source disk") {
  const auto prob = disk_torsion(1.0 / 32.0);
  SolveOptions sopts;
  sopts.tol = 1e-10;
  const auto sol = solve(prob, sopts);
  REQUIRE(sol.converged);

  ComparisonOptions opts;
  opts.analytic_measure = kPi;
  const auto report = gradient_estimate_report(prob, sol.u, opts, 0.1);
  CHECK(report.rhs == doctest::Approx(kPi / 8.0).epsilon(1e-6));
  CHECK(report.lhs == doctest::Approx(kPi / 8.0).epsilon(0.05));
  CHECK(report.ratio == doctest::Approx(report.lhs / report.rhs));
  CHECK(report.pass);  // ratio within 1 + slack
}

TEST_CASE("radial energy of the rearranged field never exceeds the original") {
  const double h = 1.0 / 32.0;
  const auto domain = make_box_grid({0.0, 0.0}, {1.0, 1.0}, h);

  DiscreteProblem iso;
  iso.domain = domain;
  iso.p = {2, 2};
  iso.lambda = {1, 1};
  iso.f = domain;

  // the product sine is far from radial: strict inequality with margin
  GridFunction u = domain;
  fill_grid(u, [](const std::vector<double>& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  });
  const auto phi_iso = klimov_symmetrize(YoungSpec::power_sum({2, 2}, {1, 1}));
  const auto check = symmetrization_check(iso, u, phi_iso);
  CHECK(check.lhs > 0.0);
  CHECK(check.rhs > 0.0);
  CHECK(check.ratio <= 1.02);

  // random low-frequency fields, both exponent patterns
  DiscreteProblem aniso = iso;
  aniso.p = {1.5, 3.0};
  const auto phi_aniso =
      klimov_symmetrize(YoungSpec::power_sum({1.5, 3.0}, {1, 1}));
  std::mt19937_64 rng(4211);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = trig_field(domain, rng, 3);
    CHECK(symmetrization_check(iso, w, phi_iso).ratio <= 1.05);
    CHECK(symmetrization_check(aniso, w, phi_aniso).ratio <= 1.05);
  }
}

TEST_CASE("near-radial field sits near the symmetrization equality case") {
  const auto prob = disk_torsion(1.0 / 32.0);
  const auto sol = solve(prob);
  REQUIRE(sol.converged);
  const auto phi = klimov_symmetrize(YoungSpec::power_sum({2, 2}, {1, 1}));
  const auto check = symmetrization_check(prob, sol.u, phi);
  CHECK(check.ratio > 0.9);
  CHECK(check.ratio <= 1.02);
}

TEST_CASE("essential-sup summability row on the disk") {
  const auto prob = disk_torsion(1.0 / 16.0);
  const auto sol = solve(prob);
  REQUIRE(sol.converged);

  RegularityParams params;
  params.table_case = RegularityCase::kBounded;
  params.m = 3.0;
  params.sigma = std::numeric_limits<double>::infinity();
  const auto report = regularity_table(prob, sol.u, params);
  CHECK_FALSE(report.outside_hypotheses);
  CHECK(report.lhs_norm == doctest::Approx(sol.u.max_abs()).epsilon(1e-12));
  CHECK(report.f_norm > 0.0);
  CHECK(report.rhs_combo > 0.0);
  CHECK(report.empirical_c > 0.0);
  CHECK(std::isfinite(report.empirical_c));

  // formula-level homogeneity of the right-hand side
  const double err = regularity_homogeneity_error(prob, sol.u, params,
                                                  {2.0, 10.0, 123.456});
  CHECK(err <= 1e-10);
}

TEST_CASE("summability hypotheses are enforced") {
  const auto prob = disk_torsion(1.0 / 8.0);
  const auto sol = solve(prob);

  RegularityParams params;
  params.table_case = RegularityCase::kBounded;
  params.m = 0.9;  // below the admissible range for p = (2,2), N = 2
  CHECK_THROWS_AS(regularity_table(prob, sol.u, params), ValidationError);
  params.allow_outside_hypotheses = true;
  const auto report = regularity_table(prob, sol.u, params);
  CHECK(report.outside_hypotheses);

  // the Lorentz-scale row is infeasible when p_bar >= N
  RegularityParams lorentz_row;
  lorentz_row.table_case = RegularityCase::kLorentzScale;
  lorentz_row.m = 1.25;
  lorentz_row.sigma = 2.0;
  CHECK_THROWS_AS(regularity_table(prob, sol.u, lorentz_row), ValidationError);
}

TEST_CASE("borderline exponential-scale summability row") {
  const auto prob = disk_torsion(1.0 / 16.0);
  const auto sol = solve(prob);

  RegularityParams params;
  params.table_case = RegularityCase::kExponentialScale;
  params.m = 1.0;  // pinned at N / p_bar
  params.sigma = 2.0;
  const auto report = regularity_table(prob, sol.u, params);
  CHECK_FALSE(report.outside_hypotheses);
  CHECK(report.lhs_norm > 0.0);
  CHECK(std::isfinite(report.lhs_norm));
  CHECK(report.empirical_c > 0.0);
  CHECK(std::isfinite(report.empirical_c));
}

TEST_CASE("Lorentz-scale summability row for slow growth") {
  auto prob = square_problem(1.0 / 16.0, {1.5, 1.5});
  SolveOptions sopts;
  const auto sol = solve(prob, sopts);
  REQUIRE(sol.converged);

  RegularityParams params;
  params.table_case = RegularityCase::kLorentzScale;
  params.m = 1.25;  // within ((p_bar*)', N/p_bar) = (1.2, 4/3)
  params.sigma = 2.0;
  const auto report = regularity_table(prob, sol.u, params);
  CHECK_FALSE(report.outside_hypotheses);
  // target space is L^{10, 2}: m N (p_bar - 1) / (N - m p_bar) = 10
  CHECK(report.lhs_norm > 0.0);
  CHECK(std::isfinite(report.lhs_norm));
  CHECK(report.empirical_c > 0.0);
  CHECK(std::isfinite(report.empirical_c));

  const double err =
      regularity_homogeneity_error(prob, sol.u, params, {3.0, 0.25});
  CHECK(err <= 1e-10);
}

TEST_CASE("truncation stability of the gradient-exponent envelope") {
  DiscreteProblem tmpl;
  tmpl.domain = make_disk_grid(1.0, 1.0 / 16.0);
  tmpl.p = {2.5, 2.5};
  tmpl.lambda = {1, 1};
  tmpl.f = tmpl.domain;

  DistributionalParams params;
  params.m = 1.4;
  params.gamma = 1.2;
  params.truncation_levels = {4.0, 8.0};

  // p = (2.5, 2.5), N = 2 violates both hypotheses in strict mode
  CHECK_THROWS_AS(distributional_exponents_check(tmpl, params),
                  ValidationError);

  params.allow_outside_hypotheses = true;
  const auto report = distributional_exponents_check(tmpl, params);
  CHECK(report.outside_hypotheses);
  CHECK(report.m_star == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
  REQUIRE(report.q.size() == 2);
  CHECK(report.q[0] == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(report.q[1] == doctest::Approx(7.0).epsilon(1e-12));

  REQUIRE(report.levels.size() == 2);
  double prev_norm = 0.0;
  for (const auto& level : report.levels) {
    CHECK(level.f_norm > prev_norm);  // truncated norms grow with the level
    prev_norm = level.f_norm;
    REQUIRE(level.grad_norms.size() == 2);
    REQUIRE(level.envelope.size() == 2);
    for (double g : level.grad_norms) CHECK(g > 0.0);
    for (double c : level.envelope) {
      CHECK(c > 0.0);
      CHECK(std::isfinite(c));
    }
  }
  CHECK(report.envelope_spread >= 1.0);
  CHECK(report.envelope_spread <= 3.0);
}
