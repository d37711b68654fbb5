#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "common.hpp"
#include "norms.hpp"

namespace anisym {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BarrierBuild {
  BarrierSpec spec;
  double discrete_measure = 0.0;
  double measure_used = 0.0;
};

// Barrier data from the problem's own pieces: the reduced Young function of
// the weighted power sum, f* stretched to the calibrated measure, and the
// pseudo-rearrangement (ordered by the solution) of phi* composed with
// c2 |g|.  Only the barrier side is calibrated; the discrete rearrangement
// of the solution keeps the measure of the masked cells.
BarrierBuild build_barrier(const DiscreteProblem& prob, const GridFunction& u,
                           const ComparisonOptions& opts) {
  prob.validate();
  BarrierBuild out;
  out.discrete_measure = prob.domain.domain_measure();
  out.measure_used =
      (opts.calibrate_measure && opts.analytic_measure > 0.0)
          ? opts.analytic_measure
          : out.discrete_measure;

  out.spec.phi = klimov_symmetrize(YoungSpec::power_sum(prob.p, prob.lambda));
  out.spec.dim = prob.domain.dim();
  out.spec.c1 = opts.c1;
  out.spec.c2 = opts.c2;
  out.spec.f_star =
      decreasing_rearrangement(prob.f).stretched(out.measure_used);

  if (prob.g.empty()) {
    out.spec.g_profile = StepProfile::constant(0.0, out.measure_used);
  } else {
    GridFunction composed = prob.domain;
    for (std::size_t j = 0; j < composed.size(); ++j) {
      if (!composed.mask(j)) continue;
      double mag2 = 0.0;
      for (const auto& gi : prob.g) mag2 += gi.value(j) * gi.value(j);
      composed.value(j) =
          conjugate_value_1d(out.spec.phi, opts.c2 * std::sqrt(mag2));
    }
    out.spec.g_profile =
        pseudo_rearrangement(composed, u).stretched(out.measure_used);
  }
  return out;
}

}  // namespace

ComparisonReport comparison_report(const DiscreteProblem& prob,
                                   const GridFunction& u,
                                   const ComparisonOptions& opts) {
  const BarrierBuild bb = build_barrier(prob, u, opts);

  ComparisonReport rep;
  rep.threshold = opts.threshold;
  rep.measure_used = bb.measure_used;
  rep.wellposed = barrier_wellposed(bb.spec);
  if (!rep.wellposed.ok()) {
    rep.pass = false;
    rep.notes = rep.wellposed.notes.empty()
                    ? "radial problem not well posed for this data"
                    : rep.wellposed.notes;
    return rep;
  }

  const RadialProfile v = barrier_solution(bb.spec, opts.barrier_nodes);
  rep.barrier_max = v.eval_measure(0.0);
  const double guard_level = opts.edge_guard * rep.barrier_max;

  const StepProfile u_star = decreasing_rearrangement(u);
  const auto& edges = u_star.edges();
  const auto& values = u_star.values();
  double worst = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    MarginRow row;
    row.s = 0.5 * (edges[k] + edges[k + 1]);
    row.u_star = values[k];
    const bool beyond = row.s > bb.measure_used;
    row.v = beyond ? 0.0 : v.eval_measure(row.s);
    row.ratio = row.v > 0.0 ? row.u_star / row.v : 0.0;
    row.guarded = beyond || row.v < guard_level;
    if (!row.guarded) worst = std::max(worst, row.ratio);
    rep.rows.push_back(row);
  }
  rep.empirical_c = worst;
  rep.pass = worst <= opts.threshold;
  return rep;
}

GradientEstimateReport gradient_estimate_report(const DiscreteProblem& prob,
                                                const GridFunction& u,
                                                const ComparisonOptions& opts,
                                                double slack) {
  const BarrierBuild bb = build_barrier(prob, u, opts);
  GradientEstimateReport rep;
  rep.lhs = gradient_integral(prob, u, EdgeSet::kAll);
  rep.rhs = barrier_gradient_energy(bb.spec);
  if (rep.rhs > 0.0) {
    rep.ratio = rep.lhs / rep.rhs;
  } else {
    rep.ratio = rep.lhs > 0.0 ? kInf : 0.0;
  }
  rep.pass = rep.ratio <= 1.0 + slack;
  return rep;
}

SymmetrizationCheck symmetrization_check(const DiscreteProblem& prob,
                                         const GridFunction& u,
                                         const OneDimYoung& phi_reduced) {
  prob.validate();
  const RadialProfile star = symmetric_rearrangement(u);

  SymmetrizationCheck check;
  check.rhs = gradient_integral(prob, u, EdgeSet::kAll);

  // The rearranged radial function is differenced at the lattice spacing,
  // matching the resolution of the grid energy on the other side.  Per-cell
  // slopes of the sorted node values are useless here: symmetry orbits make
  // the fine staircase alternate between flat and steep segments and a
  // convex integrand inflates the oscillation.
  double lhs = 0.0;
  if (star.nodes().size() >= 2) {
    const int n = star.dim();
    const double omega = unit_ball_volume(n);
    const double measure = star.nodes().back();
    const double radius = std::pow(measure / omega, 1.0 / n);
    const auto& spacing = prob.domain.spacing();
    const double delta =
        *std::min_element(spacing.begin(), spacing.end());
    double rho0 = 0.0;
    double val0 = star.eval_measure(0.0);
    while (rho0 < radius) {
      const double rho1 = std::min(rho0 + delta, radius);
      const double width = rho1 - rho0;
      if (!(width > 1e-12 * delta)) break;
      const double s1 = std::min(measure, omega * std::pow(rho1, n));
      const double val1 = star.eval_measure(s1);
      const double slope = std::fabs(val1 - val0) / width;
      const double shell = omega * (std::pow(rho1, n) - std::pow(rho0, n));
      lhs += phi_reduced.eval(slope) * shell;
      rho0 = rho1;
      val0 = val1;
    }
  }
  check.lhs = lhs;
  check.ratio = check.rhs > 0.0 ? check.lhs / check.rhs
                                : (check.lhs > 0.0 ? kInf : 0.0);
  return check;
}

// ---------------------------------------------------------------------------
// Summability tables.

namespace {

// Validates the (m, sigma) ranges of the chosen row; returns an explanation
// when the parameters fall outside them.
std::string check_row_hypotheses(RegularityCase table_case, double m,
                                 double sigma, double pbar, int n) {
  const double critical = static_cast<double>(n) / pbar;
  std::ostringstream why;
  switch (table_case) {
    case RegularityCase::kBounded:
      if (m > critical + 1e-12) return {};
      if (nearly_equal(m, critical, 1e-9) && sigma <= 1.0) return {};
      why << "essential-sup row requires m > N/p_bar = " << critical
          << " (or equality with sigma <= 1); got m = " << m
          << ", sigma = " << sigma;
      return why.str();
    case RegularityCase::kExponentialScale:
      if (nearly_equal(m, critical, 1e-9) && sigma > 1.0) return {};
      why << "exponential-scale row requires m == N/p_bar = " << critical
          << " and sigma > 1; got m = " << m << ", sigma = " << sigma;
      return why.str();
    case RegularityCase::kLorentzScale: {
      if (pbar >= n - 1e-12) {
        why << "Lorentz-scale row requires p_bar < N; got p_bar = " << pbar
            << ", N = " << n;
        return why.str();
      }
      const double sobolev = n * pbar / (n - pbar);
      const double lower = sobolev / (sobolev - 1.0);
      if (m > lower + 1e-12 && m < critical - 1e-12) return {};
      why << "Lorentz-scale row requires m in (" << lower << ", " << critical
          << "); got m = " << m;
      return why.str();
    }
  }
  return "unknown table row";
}

}  // namespace

RegularityReport regularity_table(const DiscreteProblem& prob,
                                  const GridFunction& u,
                                  const RegularityParams& params) {
  prob.validate();
  const int n = prob.domain.dim();
  const double pbar = prob.p_bar();

  RegularityReport rep;
  rep.table_case = params.table_case;
  const std::string why =
      check_row_hypotheses(params.table_case, params.m, params.sigma, pbar, n);
  if (!why.empty()) {
    if (!params.allow_outside_hypotheses) throw ValidationError(why);
    rep.outside_hypotheses = true;
  }

  const StepProfile u_star = decreasing_rearrangement(u);
  switch (params.table_case) {
    case RegularityCase::kBounded:
      rep.lhs_norm = u.max_abs();
      break;
    case RegularityCase::kExponentialScale:
      rep.lhs_norm = lorentz_zygmund_norm(u_star, kInf, params.sigma, -1.0);
      break;
    case RegularityCase::kLorentzScale: {
      const double target =
          params.m * n * (pbar - 1.0) / (n - params.m * pbar);
      rep.lhs_norm = lorentz_norm(u_star, target, params.sigma);
      break;
    }
  }

  rep.f_norm =
      lorentz_norm(decreasing_rearrangement(prob.f), params.m, params.sigma);
  const double expo = 1.0 / (pbar - 1.0);
  rep.f_term = std::pow(rep.f_norm, expo);
  rep.rhs_combo = rep.f_term;
  for (const auto& gi : prob.g) {
    const double gn =
        lorentz_norm(decreasing_rearrangement(gi), params.m, params.sigma);
    rep.g_norms.push_back(gn);
    rep.g_terms.push_back(std::pow(gn, expo));
    rep.rhs_combo += rep.g_terms.back();
  }
  rep.empirical_c = rep.rhs_combo > 0.0 ? rep.lhs_norm / rep.rhs_combo : 0.0;
  return rep;
}

double regularity_homogeneity_error(const DiscreteProblem& prob,
                                    const GridFunction& u,
                                    const RegularityParams& params,
                                    const std::vector<double>& factors) {
  const RegularityReport base = regularity_table(prob, u, params);
  const double expo = 1.0 / (prob.p_bar() - 1.0);
  double worst = 0.0;
  for (double t : factors) {
    if (!(t > 0.0)) throw ValidationError("scaling factors must be positive");
    const double scaled = std::pow(t * base.f_norm, expo);
    const double expected = std::pow(t, expo) * base.f_term;
    const double scale = std::max(std::fabs(expected), 1e-300);
    worst = std::max(worst, std::fabs(scaled - expected) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Distributional gradient exponents under truncation.

namespace {

// Exact Lorentz L^{m, q} functional of min(|x|^{-gamma}, level) rearranged
// on a ball of the given measure: the rearrangement is
//   f*(s) = min( (s / omega_n)^{-gamma/n}, level ),
// a power tail behind a flat head, so both integral pieces are elementary.
double truncated_datum_norm(double gamma, double level, double m, double q,
                            int n, double omega, double measure) {
  const double s_flat =
      std::min(measure, omega * std::pow(level, -static_cast<double>(n) / gamma));
  double total = 0.0;
  if (s_flat > 0.0) {
    total += std::pow(level, q) *
             integrate_power(1.0, q / m - 1.0, 0.0, s_flat);
  }
  if (s_flat < measure) {
    total += std::pow(omega, gamma * q / n) *
             integrate_power(1.0, q / m - gamma * q / n - 1.0, s_flat, measure);
  }
  return std::pow(total, 1.0 / q);
}

}  // namespace

DistributionalReport distributional_exponents_check(
    const DiscreteProblem& prob_template, const DistributionalParams& params) {
  prob_template.validate();
  const int n = prob_template.domain.dim();
  const double pbar = prob_template.p_bar();
  const double pbar_conj = pbar / (pbar - 1.0);

  if (!(params.m < n)) {
    throw ValidationError("datum index m must be below the dimension");
  }
  if (!(params.gamma > 0.0)) {
    throw ValidationError("datum exponent gamma must be positive");
  }

  std::ostringstream why;
  if (pbar >= n) {
    why << "m-range hypothesis needs p_bar < N (got p_bar = " << pbar
        << ", N = " << n << "); ";
  } else {
    const double sobolev = n * pbar / (n - pbar);
    const double upper = sobolev / (sobolev - 1.0);
    if (!(params.m > 1.0 && params.m < upper)) {
      why << "m must lie in (1, " << upper << "), got " << params.m << "; ";
    }
  }
  const double edge = static_cast<double>(n) / (n - 1.0);
  for (std::size_t i = 0; i < prob_template.p.size(); ++i) {
    if (!(prob_template.p[i] / pbar_conj > edge)) {
      why << "p_" << (i + 1) << " / p_bar' = "
          << prob_template.p[i] / pbar_conj << " must exceed N/(N-1) = "
          << edge << "; ";
    }
  }

  DistributionalReport rep;
  if (!why.str().empty()) {
    if (!params.allow_outside_hypotheses) throw ValidationError(why.str());
    rep.outside_hypotheses = true;
  }

  rep.m_star = n * params.m / (n - params.m);
  for (double pi : prob_template.p) {
    rep.q.push_back(pi * rep.m_star / pbar_conj);
  }

  const double omega = unit_ball_volume(n);
  const double measure = prob_template.domain.domain_measure();
  for (double level : params.truncation_levels) {
    if (!(level > 0.0)) {
      throw ValidationError("truncation levels must be positive");
    }
    DiscreteProblem prob = prob_template;
    prob.f = prob_template.domain;
    fill_grid(prob.f, [&](const std::vector<double>& x) {
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      if (r2 <= 0.0) return level;
      return std::min(level, std::pow(std::sqrt(r2), -params.gamma));
    });
    const SolveResult sol = solve(prob, params.solver);

    DistributionalLevel row;
    row.level = level;
    row.f_norm = truncated_datum_norm(params.gamma, level, params.m,
                                      rep.m_star, n, omega, measure);
    for (std::size_t i = 0; i < rep.q.size(); ++i) {
      const double gi = gradient_norms(prob, sol.u, rep.q[i])[i];
      row.grad_norms.push_back(gi);
      row.envelope.push_back(gi /
                             std::pow(row.f_norm, rep.m_star / rep.q[i]));
    }
    rep.levels.push_back(std::move(row));
  }

  double spread = 1.0;
  for (std::size_t i = 0; i < rep.q.size(); ++i) {
    double lo = kInf, hi = 0.0;
    for (const auto& row : rep.levels) {
      lo = std::min(lo, row.envelope[i]);
      hi = std::max(hi, row.envelope[i]);
    }
    if (lo > 0.0 && std::isfinite(hi)) spread = std::max(spread, hi / lo);
  }
  rep.envelope_spread = rep.levels.empty() ? 0.0 : spread;
  return rep;
}

}  // namespace anisym
