#include "barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "common.hpp"

namespace anisym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 5-point Gauss-Legendre rule on [a, b]; the integrands below are smooth on
// every sub-interval of the refined grids, so this converges spectrally.
template <typename F>
double gauss5(const F& f, double a, double b) {
  static const double kX[5] = {-0.906179845938663992797626878299,
                               -0.538469310105683091036314420700, 0.0,
                               0.538469310105683091036314420700,
                               0.906179845938663992797626878299};
  static const double kW[5] = {0.236926885056189087514264040720,
                               0.478628670499366468041291514836,
                               0.568888888888888888888888888889,
                               0.478628670499366468041291514836,
                               0.236926885056189087514264040720};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += kW[i] * f(mid + half * kX[i]);
  return sum * half;
}

// Everything needed to evaluate F(r); built once per entry point.
struct FluxContext {
  const BarrierSpec* spec;
  double total;       // |Omega|
  double omega;       // omega_N
  double dim_scale;   // N * omega_N^{1/N}
  PsiMap psi_map;
  std::optional<ConjugateInverse> conj_inv;

  explicit FluxContext(const BarrierSpec& s)
      : spec(&s), total(s.measure()), omega(unit_ball_volume(s.dim)),
        dim_scale(s.dim * std::pow(unit_ball_volume(s.dim), 1.0 / s.dim)),
        psi_map(s.phi) {
    if (s.g_profile.max_value() > 0.0) conj_inv.emplace(s.phi);
  }

  double datum(double r) const {
    const double source = std::pow(r, 1.0 / spec->dim) *
                          spec->f_star.running_average(r) / dim_scale;
    double divergence = 0.0;
    if (conj_inv) divergence = conj_inv->eval(spec->g_profile.eval(r));
    return spec->c1 * (source + divergence);
  }

  double flux(double r) const {
    const double d = datum(r);
    if (d <= 0.0) return 0.0;
    return psi_map.inverse(d);
  }
};

// Radii of the data breakpoints plus a refinement graded quadratically
// towards the origin, ascending, spanning [0, R].  The grading keeps the
// piecewise-linear-in-measure interpolation of the solution profile
// uniformly accurate: near the centre equal measure steps stretch to wide
// radius steps, so uniform radii would leave O(delta^2 / rho) chord gaps.
std::vector<double> radial_grid(const FluxContext& ctx, int nodes) {
  const int n = ctx.spec->dim;
  const double radius = std::pow(ctx.total / ctx.omega, 1.0 / n);
  std::vector<double> rho(nodes + 1);
  for (int i = 0; i <= nodes; ++i) {
    const double t = static_cast<double>(i) / nodes;
    rho[i] = radius * t * t;
  }
  auto add_edges = [&](const std::vector<double>& edges) {
    for (double s : edges) {
      if (s > 0.0 && s < ctx.total) {
        rho.push_back(std::pow(s / ctx.omega, 1.0 / n));
      }
    }
  };
  add_edges(ctx.spec->f_star.edges());
  add_edges(ctx.spec->g_profile.edges());
  std::sort(rho.begin(), rho.end());
  std::vector<double> out;
  out.reserve(rho.size());
  for (double p : rho) {
    if (out.empty() || p - out.back() > 1e-13 * radius) out.push_back(p);
  }
  out.front() = 0.0;
  out.back() = radius;
  return out;
}

// Measure-coordinate sample points (edges and midpoints of a refined grid)
// used to scan the datum for range violations.
std::vector<double> scan_points(const FluxContext& ctx, int per_piece) {
  std::vector<double> brk{ctx.total};
  auto add_edges = [&](const std::vector<double>& edges) {
    for (double s : edges) {
      if (s > 0.0 && s < ctx.total) brk.push_back(s);
    }
  };
  add_edges(ctx.spec->f_star.edges());
  add_edges(ctx.spec->g_profile.edges());
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
  std::vector<double> pts;
  double lo = 0.0;
  for (double hi : brk) {
    const double start = (lo == 0.0) ? hi * 1e-6 : lo;
    for (int j = 0; j <= per_piece; ++j) {
      pts.push_back(start * std::pow(hi / start,
                                     static_cast<double>(j) / per_piece));
    }
    lo = hi;
  }
  return pts;
}

}  // namespace

double BarrierSpec::measure() const {
  if (dim < 2) {
    throw ValidationError("BarrierSpec: the dimension must be at least 2");
  }
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw ValidationError("BarrierSpec: the constants must be positive");
  }
  const double mf = f_star.measure();
  const double mg = g_profile.measure();
  if (!(mf > 0.0)) {
    throw ValidationError("BarrierSpec: the source profile is empty");
  }
  if (!nearly_equal(mf, mg, 1e-9)) {
    throw ValidationError(
        "BarrierSpec: the source and divergence profiles must cover the "
        "same domain measure");
  }
  return mf;
}

double barrier_flux(const BarrierSpec& spec, double r) {
  const FluxContext ctx(spec);
  return ctx.flux(r);
}

StepProfile barrier_flux_profile(const BarrierSpec& spec, int refine) {
  const FluxContext ctx(spec);
  refine = std::max(refine, 1);
  std::vector<double> brk{ctx.total};
  auto add_edges = [&](const std::vector<double>& src) {
    for (double s : src) {
      if (s > 0.0 && s < ctx.total) brk.push_back(s);
    }
  };
  add_edges(spec.f_star.edges());
  add_edges(spec.g_profile.edges());
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  std::vector<double> edges{0.0};
  double lo = 0.0;
  for (double hi : brk) {
    if (lo == 0.0) {
      // One small head piece, then log-spaced refinement up to the first
      // breakpoint.
      const double head = hi * 1e-4;
      edges.push_back(head);
      for (int j = 1; j < refine; ++j) {
        edges.push_back(head *
                        std::pow(hi / head, static_cast<double>(j) / (refine - 1)));
      }
      if (refine == 1) edges.push_back(hi);
    } else {
      for (int j = 1; j <= refine; ++j) {
        edges.push_back(lo *
                        std::pow(hi / lo, static_cast<double>(j) / refine));
      }
    }
    edges.back() = hi;
    lo = hi;
  }
  std::vector<double> vals(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    vals[k] = ctx.flux(0.5 * (edges[k] + edges[k + 1]));
  }
  return StepProfile(edges, vals);
}

RadialProfile barrier_solution(const BarrierSpec& spec, int nodes) {
  const FluxContext ctx(spec);
  nodes = std::max(nodes, 16);
  const std::vector<double> rho = radial_grid(ctx, nodes);
  const int n = spec.dim;
  auto slope = [&](double p) {
    return ctx.flux(ctx.omega * std::pow(p, n));
  };
  std::vector<double> vals(rho.size(), 0.0);
  for (std::size_t i = rho.size() - 1; i-- > 0;) {
    vals[i] = vals[i + 1] + gauss5(slope, rho[i], rho[i + 1]);
  }
  std::vector<double> meas(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    meas[i] = ctx.omega * std::pow(rho[i], n);
  }
  meas.back() = ctx.total;
  return RadialProfile(n, meas, vals);
}

double barrier_gradient_energy(const BarrierSpec& spec) {
  const FluxContext ctx(spec);
  const std::vector<double> rho = radial_grid(ctx, 2048);
  const int n = spec.dim;
  auto density = [&](double p) {
    const double r = ctx.omega * std::pow(p, n);
    return spec.phi.eval(ctx.flux(r)) * n * ctx.omega * std::pow(p, n - 1);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    total += gauss5(density, rho[i], rho[i + 1]);
  }
  return total;
}

BarrierWellPosed barrier_wellposed(const BarrierSpec& spec) {
  BarrierWellPosed out;
  const FluxContext ctx(spec);
  const double sup = ctx.psi_map.range_sup();
  out.psi_range_unbounded = std::isinf(sup);

  double h_max = 0.0;
  if (out.psi_range_unbounded) {
    out.pointwise_range_ok = true;
    out.worst_range_margin = kInf;
    for (double r : scan_points(ctx, 64)) {
      h_max = std::max(h_max, ctx.datum(r));
    }
  } else {
    double worst = kInf;
    bool ok = true;
    for (double r : scan_points(ctx, 64)) {
      const double d = ctx.datum(r);
      h_max = std::max(h_max, d);
      worst = std::min(worst, sup - d);
      if (d >= sup) ok = false;
    }
    out.pointwise_range_ok = ok;
    out.worst_range_margin = worst;
    if (!ok) {
      out.notes +=
          "the datum reaches the least upper bound of phi(s)/s, so the "
          "radial problem has no solution for this data; ";
    }
  }

  if (out.pointwise_range_ok) {
    out.gradient_energy = barrier_gradient_energy(spec);
    out.gradient_energy_finite = std::isfinite(out.gradient_energy);
  } else {
    out.gradient_energy = kInf;
    out.gradient_energy_finite = false;
  }

  const double g_total = spec.g_profile.integral();
  out.data_admissible = std::isfinite(g_total) && std::isfinite(h_max) &&
                        sup > 0.0;
  if (!out.data_admissible) {
    out.notes += "the data profiles are not admissible for this growth; ";
  }
  return out;
}

}  // namespace anisym
