#include "norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "common.hpp"

namespace anisym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decreasing rearrangement of a step profile: pieces sorted by |value|,
// re-laid starting at 0.  Every norm below goes through this, so inputs
// need not be sorted (or even non-negative).
StepProfile sort_decreasing(const StepProfile& f) {
  const auto& e = f.edges();
  const auto& v = f.values();
  std::vector<std::pair<double, double>> pieces;  // (|value|, width)
  pieces.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    pieces.emplace_back(std::fabs(v[k]), e[k + 1] - e[k]);
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const std::pair<double, double>& a,
                      const std::pair<double, double>& b) {
                     return a.first > b.first;
                   });
  std::vector<double> ne{0.0};
  std::vector<double> nv;
  ne.reserve(pieces.size() + 1);
  nv.reserve(pieces.size());
  for (const auto& piece : pieces) {
    ne.push_back(ne.back() + piece.second);
    nv.push_back(piece.first);
  }
  return StepProfile(ne, nv);
}

// int_W^inf w^c (1 + log w)^d dw for W >= 1.  The borderline c == -1 has a
// closed form; otherwise a short asymptotic expansion (exact when d == 0).
double power_log_tail(double W, double c, double d) {
  const double z = 1.0 + std::log(W);
  if (std::fabs(c + 1.0) <= 1e-9) {
    if (d >= -1.0 - 1e-9) return kInf;
    return std::pow(z, d + 1.0) / (-1.0 - d);
  }
  if (c > -1.0) return kInf;
  const double C = -(c + 1.0);
  const double lead = std::pow(W, c + 1.0) * std::pow(z, d) / C;
  const double corr1 = d / (C * z);
  const double corr2 = corr1 * (d - 1.0) / (C * z);
  return lead * (1.0 + corr1 + corr2);
}

bool monotone_values(const std::vector<double>& v) {
  bool inc = true;
  bool dec = true;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double tol = 1e-12 * (1.0 + std::fabs(v[k]) + std::fabs(v[k - 1]));
    if (v[k] > v[k - 1] + tol) dec = false;
    if (v[k] < v[k - 1] - tol) inc = false;
  }
  return inc || dec;
}

// Modular int_0^m A(|f*(s)| / t) ds of a sorted profile: a finite sum since
// the integrand is constant on every piece.  Values are capped so that an
// overflowing Young function still yields a usable "way above 1" answer.
double orlicz_modular(const StepProfile& g, const OneDimYoung& a, double t) {
  const auto& e = g.edges();
  const auto& v = g.values();
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    double val = a.eval(v[k] / t);
    if (!std::isfinite(val)) val = 1e120;
    total += std::min(val, 1e120) * (e[k + 1] - e[k]);
    if (total > 4.0) return total;
  }
  return total;
}

// Modular of s |-> w(s) f*(s).  Pieces away from zero are integrated
// adaptively; the piece touching s = 0 is integrated after the substitution
// s = e^{-u} in geometric panels, with a fitted power tail when the
// transformed integrand decays only polynomially.
double weighted_modular(const StepProfile& g,
                        const std::function<double(double)>& weight,
                        const OneDimYoung& a, double t) {
  const auto& e = g.edges();
  const auto& v = g.values();
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    const double vk = v[k];
    auto integrand = [&](double s) {
      double val = a.eval(weight(s) * vk / t);
      if (!std::isfinite(val)) val = 1e120;
      return std::min(val, 1e120);
    };
    if (e[k] > 0.0) {
      total += integrate_adaptive(integrand, e[k], e[k + 1], 1e-10, 45);
    } else {
      const double u0 = -std::log(e[k + 1]);
      auto trans = [&](double u) {
        const double s = std::exp(-u);
        return integrand(s) * s;
      };
      const double panel = 6.0;
      double acc = 0.0;
      double ua = u0;
      bool truncated = true;
      for (int i = 0; i < 60; ++i) {
        const double ub = ua + panel;
        const double part = integrate_adaptive(trans, ua, ub, 1e-10, 40);
        acc += part;
        ua = ub;
        if (part < 1e-280 || part <= 1e-13 * std::max(acc, 1e-280)) {
          truncated = false;
          break;
        }
        if (acc > 8.0) {
          truncated = false;
          break;
        }
      }
      if (truncated) {
        // Slowly decaying transformed integrand: estimate the remainder
        // from the local log-log slope.
        const double u1 = ua;
        const double u2 = 1.5 * ua;
        const double g1 = trans(u1);
        const double g2 = trans(u2);
        if (g1 > 0.0 && g2 > 0.0) {
          const double slope = std::log(g2 / g1) / std::log(u2 / u1);
          if (slope >= -1.0 - 1e-6) return kInf;
          acc += g1 * u1 / (-slope - 1.0);
        }
      }
      total += acc;
    }
    if (!std::isfinite(total) || total > 8.0) return total;
  }
  return total;
}

// Luxemburg bisection on a non-increasing modular t |-> G(t).
double luxemburg_from_modular(const std::function<double(double)>& modular,
                              double scale) {
  double hi = std::max(scale, 1e-30);
  int guard = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 500) return kInf;
  }
  double lo = hi * 0.5;
  guard = 0;
  while (modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300 || ++guard > 500) return 0.0;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double log_slope(const std::function<double(double)>& f, double s1,
                 double s2) {
  const double f1 = f(s1);
  const double f2 = f(s2);
  if (!(f1 > 0.0) || !(f2 > 0.0)) return 0.0;
  return std::log(f2 / f1) / std::log(s2 / s1);
}

// Piecewise log-log-linear interpolant through positive (x_j, y_j) pairs,
// extrapolating with the end slopes.  Exact on pure powers.
class LogLogTable {
 public:
  LogLogTable(std::vector<double> x, std::vector<double> y)
      : lx_(std::move(x)), ly_(std::move(y)) {
    for (auto& val : lx_) val = std::log(val);
    for (auto& val : ly_) val = std::log(val);
  }

  double eval(double x) const {
    const double l = std::log(x);
    std::size_t hi =
        std::upper_bound(lx_.begin(), lx_.end(), l) - lx_.begin();
    if (hi == 0) hi = 1;
    if (hi == lx_.size()) hi = lx_.size() - 1;
    const double t = (l - lx_[hi - 1]) / (lx_[hi] - lx_[hi - 1]);
    return std::exp(ly_[hi - 1] + t * (ly_[hi] - ly_[hi - 1]));
  }

 private:
  std::vector<double> lx_;
  std::vector<double> ly_;
};

}  // namespace

double lorentz_norm(const StepProfile& f, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw ValidationError("lorentz_norm: p and q must be positive");
  }
  const StepProfile g = sort_decreasing(f);
  if (g.max_value() == 0.0) return 0.0;
  const auto& e = g.edges();
  const auto& v = g.values();
  const bool p_inf = std::isinf(p);
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0.0) continue;
      const double factor = p_inf ? 1.0 : std::pow(e[k + 1], 1.0 / p);
      best = std::max(best, v[k] * factor);
    }
    return best;
  }
  if (p_inf) return kInf;  // int_0 (f*)^q ds/s diverges for nonzero f
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    total +=
        integrate_power(std::pow(v[k], q), q / p - 1.0, e[k], e[k + 1]);
  }
  return std::pow(total, 1.0 / q);
}

double lorentz_zygmund_norm(const StepProfile& f, double p, double q,
                            double alpha, double beta_loglog) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw ValidationError("lorentz_zygmund_norm: p and q must be positive");
  }
  if (alpha == 0.0 && beta_loglog == 0.0) return lorentz_norm(f, p, q);
  const StepProfile g = sort_decreasing(f);
  if (g.max_value() == 0.0) return 0.0;
  const auto& e = g.edges();
  const auto& v = g.values();
  const double m = g.measure();
  const bool p_inf = std::isinf(p);
  auto weight = [m, alpha, beta_loglog](double s) {
    const double L = 1.0 + std::log(m / s);
    return std::pow(L, alpha) * std::pow(1.0 + std::log(L), beta_loglog);
  };

  if (std::isinf(q)) {
    if (p_inf &&
        (alpha > 0.0 || (alpha == 0.0 && beta_loglog > 0.0))) {
      return kInf;  // weight blows up at s = 0 against a bounded profile
    }
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0.0) continue;
      auto val = [&](double x) {
        const double s = std::exp(x);
        const double factor = p_inf ? 1.0 : std::pow(s, 1.0 / p);
        return factor * weight(s) * v[k];
      };
      const double lo = (e[k] > 0.0) ? e[k] : e[k + 1] * 1e-15;
      const double xlo = std::log(lo);
      const double xhi = std::log(e[k + 1]);
      const double xstar = maximize_concave(val, xlo, xhi, 1e-11);
      best = std::max({best, val(xlo), val(xhi), val(xstar)});
    }
    return best;
  }

  const double qa = q * alpha;
  const double qb = q * beta_loglog;
  if (p_inf) {
    const bool converges =
        qa < -1.0 - 1e-9 ||
        (std::fabs(qa + 1.0) <= 1e-9 && qb < -1.0 - 1e-9);
    if (!converges) return kInf;
  }

  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    const double vq = std::pow(v[k], q);
    const double a = e[k];
    const double b = e[k + 1];
    if (a > 0.0) {
      total += vq * integrate_adaptive(
                        [&](double s) {
                          const double sp = p_inf ? 1.0 : std::pow(s, q / p);
                          return sp * std::pow(weight(s), q) / s;
                        },
                        a, b, 1e-11, 48);
      continue;
    }
    // s = m e^{1-w} turns ds/s into dw and the weight into powers of w.
    const double wb = 1.0 + std::log(m / b);
    auto logs = [qa, qb](double w) {
      return std::pow(w, qa) * std::pow(1.0 + std::log(w), qb);
    };
    if (p_inf) {
      const double wcut = wb + 600.0;
      double piece = integrate_adaptive(logs, wb, wcut, 1e-11, 48);
      piece += power_log_tail(wcut, qa, qb);
      total += vq * piece;
    } else {
      const double rate = q / p;
      const double wcut = wb + 750.0 / rate + 10.0;
      const double piece = integrate_adaptive(
          [&](double w) { return std::exp((1.0 - w) * rate) * logs(w); },
          wb, wcut, 1e-11, 48);
      total += vq * std::pow(m, q / p) * piece;
    }
  }
  return std::pow(total, 1.0 / q);
}

double luxemburg_norm(const StepProfile& f, const OneDimYoung& a) {
  const StepProfile g = sort_decreasing(f);
  if (g.max_value() == 0.0) return 0.0;
  auto modular = [&](double t) { return orlicz_modular(g, a, t); };
  return luxemburg_from_modular(modular,
                                g.max_value() * std::max(1.0, g.measure()));
}

double luxemburg_norm_weighted(const StepProfile& f,
                               const std::function<double(double)>& weight,
                               const OneDimYoung& a) {
  const StepProfile g = sort_decreasing(f);
  if (g.max_value() == 0.0) return 0.0;
  auto modular = [&](double t) { return weighted_modular(g, weight, a, t); };
  return luxemburg_from_modular(modular, 1.0);
}

OneDimYoung orlicz_lorentz_generator(const OneDimYoung& a, int n,
                                     bool normalize_at_zero, double knot) {
  if (n < 2) {
    throw ValidationError(
        "orlicz_lorentz_generator: the dimension must be at least 2");
  }
  // The capacity integral needs int_0 (s/A(s))^{1/(n-1)} ds < inf, i.e. the
  // growth exponent of A at zero must stay below n.
  auto aeval = [&a](double s) { return a.eval(s); };
  const double e0 = log_slope(aeval, 1e-8, 1e-5);
  const bool degenerate_at_zero =
      a.plateau_edge() > 0.0 || e0 >= n - 1e-6;
  OneDimYoung work = a;
  if (degenerate_at_zero) {
    if (!normalize_at_zero) {
      throw ValidationError(
          "orlicz_lorentz_generator: the integral condition at zero fails; "
          "renormalization of the Young function near zero is required");
    }
    work = normalize_near_zero(a, knot);
  }

  const double inv_nm1 = 1.0 / (n - 1.0);
  const double np = n / (n - 1.0);
  auto aprime = [&work](double r) { return work.derivative(r); };

  // Cumulative K(r) = int_0^r (A')^{-1/(n-1)}, tabulated on a log grid with
  // an exact power head.
  const double r_lo = 1e-9;
  const double r_hi = 1e12;
  const int pts_per_decade = 24;
  const int decades = 21;
  const int m_pts = pts_per_decade * decades + 1;
  std::vector<double> rg(m_pts);
  for (int j = 0; j < m_pts; ++j) {
    rg[j] = r_lo * std::pow(10.0, static_cast<double>(j) / pts_per_decade);
  }
  auto kern = [&](double r) { return std::pow(aprime(r), -inv_nm1); };
  const double ea = log_slope(aprime, 1e-8, 1e-6);
  const double head_expo = 1.0 - ea * inv_nm1;
  if (!(head_expo > 1e-9)) {
    throw NumericalError(
        "orlicz_lorentz_generator: the kernel is not integrable at zero");
  }
  std::vector<double> kcum(m_pts);
  kcum[0] = kern(rg[0]) * rg[0] / head_expo;
  for (int j = 1; j < m_pts; ++j) {
    kcum[j] = kcum[j - 1] +
              integrate_adaptive(kern, rg[j - 1], rg[j], 1e-10, 42);
  }
  const LogLogTable ktab(rg, kcum);

  auto cap_kernel = [&](double r) {
    return std::pow(ktab.eval(r), -static_cast<double>(n)) *
           std::pow(aprime(r), -np);
  };

  // Sample s, map to R = (A')^{-1}(s), and accumulate the capacity integral
  // T(R) = int_R^inf downwards from a fitted power tail.
  const double s_lo = std::max(1e-4, aprime(1e-3) * 1.02);
  const double s_hi = aprime(1e7);
  if (!(s_hi > s_lo * 10.0)) {
    throw NumericalError(
        "orlicz_lorentz_generator: the derivative range is degenerate");
  }
  const int n_s = 241;
  std::vector<double> sg(n_s), radius(n_s);
  const double lr = std::log(s_hi / s_lo);
  for (int j = 0; j < n_s; ++j) {
    sg[j] = s_lo * std::exp(lr * j / (n_s - 1.0));
    radius[j] = solve_increasing(aprime, sg[j], 1e-12, 1e9, 1e-13);
  }
  const double r_top = radius.back();
  const double tail_slope = log_slope(cap_kernel, r_top, 3.0 * r_top);
  if (tail_slope >= -1.0 - 1e-8) {
    throw NumericalError(
        "orlicz_lorentz_generator: the capacity integral diverges at "
        "infinity");
  }
  std::vector<double> cap(n_s);
  cap[n_s - 1] = cap_kernel(r_top) * r_top / (-tail_slope - 1.0);
  for (int j = n_s - 2; j >= 0; --j) {
    cap[j] = cap[j + 1];
    if (radius[j + 1] - radius[j] > 1e-14 * radius[j + 1]) {
      cap[j] += integrate_adaptive(cap_kernel, radius[j], radius[j + 1],
                                   1e-9, 45);
    }
  }

  // b^{-1}(s) = T^{-1/(n-1)}; invert by swapping coordinates and integrate
  // b piecewise as a power to recover B.
  std::vector<double> sig, lvl;
  for (int j = 0; j < n_s; ++j) {
    if (!(cap[j] > 0.0) || !std::isfinite(cap[j])) continue;
    const double s_val = std::pow(cap[j], -inv_nm1);
    if (!sig.empty() && s_val <= sig.back() * (1.0 + 1e-12)) continue;
    sig.push_back(s_val);
    lvl.push_back(sg[j]);
  }
  if (sig.size() < 8) {
    throw NumericalError(
        "orlicz_lorentz_generator: too few usable samples for the "
        "generated Young function");
  }
  std::vector<double> bvals(sig.size());
  {
    const double g0 =
        std::log(lvl[1] / lvl[0]) / std::log(sig[1] / sig[0]);
    bvals[0] = lvl[0] * sig[0] / (std::max(g0, 0.0) + 1.0);
  }
  for (std::size_t j = 1; j < sig.size(); ++j) {
    const double gj =
        std::log(lvl[j] / lvl[j - 1]) / std::log(sig[j] / sig[j - 1]);
    bvals[j] = bvals[j - 1] +
               (lvl[j] * sig[j] - lvl[j - 1] * sig[j - 1]) / (gj + 1.0);
  }

  // Tail model from two log-decade windows of the sampled values.
  const LogLogTable btab(sig, bvals);
  const double edge = sig.back();
  TailModel tail;
  {
    auto beval = [&btab](double s) { return btab.eval(s); };
    const double m1 = log_slope(beval, edge / 10.0, edge);
    const double m2 = log_slope(beval, edge / 100.0, edge / 10.0);
    auto mu = [](double s1, double s2) {
      return std::log(std::log(s2) / std::log(s1)) / std::log(s2 / s1);
    };
    const double mu1 = mu(edge / 10.0, edge);
    const double mu2 = mu(edge / 100.0, edge / 10.0);
    double aa = 0.0;
    if (std::fabs(m1 - m2) > 1e-10 && std::fabs(mu1 - mu2) > 1e-18) {
      aa = (m1 - m2) / (mu1 - mu2);
    }
    aa = std::clamp(aa, -30.0, 30.0);
    tail.q = std::clamp(m1 - aa * mu1, 1.0, 500.0);
    tail.log_exp = aa;
    tail.edge = edge;
    tail.coeff = bvals.back() / (std::pow(edge, tail.q) *
                                 std::pow(std::log(edge), tail.log_exp));
  }

  std::vector<double> samples{0.0};
  std::vector<double> values{0.0};
  samples.insert(samples.end(), sig.begin(), sig.end());
  values.insert(values.end(), bvals.begin(), bvals.end());
  return OneDimYoung::from_samples(std::move(samples), std::move(values),
                                   tail);
}

double orlicz_lorentz_norm(const StepProfile& f, const OneDimYoung& a, int n,
                           bool normalize_at_zero, double knot) {
  const OneDimYoung b = orlicz_lorentz_generator(a, n, normalize_at_zero,
                                                 knot);
  const double inv_n = 1.0 / n;
  return luxemburg_norm_weighted(
      f, [inv_n](double s) { return std::pow(s, -inv_n); }, b);
}

double HardyReport::ratio_down() const {
  if (rhs_down == 0.0) return lhs_down == 0.0 ? 0.0 : kInf;
  if (std::isinf(rhs_down)) return std::isinf(lhs_down) ? 1.0 : 0.0;
  return lhs_down / rhs_down;
}

double HardyReport::ratio_up() const {
  if (rhs_up == 0.0) return lhs_up == 0.0 ? 0.0 : kInf;
  if (std::isinf(rhs_up)) return std::isinf(lhs_up) ? 1.0 : 0.0;
  return lhs_up / rhs_up;
}

HardyReport hardy_check(const StepProfile& psi, double r, double q) {
  if (!(r > 0.0) || !(q > 0.0) || std::isinf(q)) {
    throw ValidationError("hardy_check: requires r > 0 and 0 < q < inf");
  }
  const auto& e = psi.edges();
  const auto& v = psi.values();
  if (q < 1.0 && !monotone_values(v)) {
    throw ValidationError(
        "hardy_check: exponents below 1 are only valid on the monotone "
        "cone; the profile is not monotone");
  }

  std::vector<double> prefix(v.size() + 1, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    prefix[k + 1] = prefix[k] + v[k] * (e[k + 1] - e[k]);
  }
  const double mass = prefix.back();
  const double m = e.back();
  HardyReport rep;
  if (mass == 0.0) return rep;

  // Averaging from below: Phi(t) = int_0^t psi.
  double down = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = e[k];
    const double b = e[k + 1];
    if (v[k] == 0.0) {
      if (prefix[k] > 0.0) {
        down += integrate_power(std::pow(prefix[k], q), -r * q - 1.0, a, b);
      }
      continue;
    }
    if (a == 0.0) {
      // Phi(t) = v t exactly on the first piece.
      down += integrate_power(std::pow(v[k], q), q * (1.0 - r) - 1.0, a, b);
      continue;
    }
    down += integrate_adaptive(
        [&](double t) {
          return std::pow(t, -r * q) *
                 std::pow(prefix[k] + v[k] * (t - a), q) / t;
        },
        a, b, 1e-12, 48);
  }
  down += std::pow(mass, q) * std::pow(m, -r * q) / (r * q);
  rep.lhs_down = std::pow(down, 1.0 / q);

  double rhs_down = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    rhs_down += integrate_power(std::pow(v[k], q), q * (1.0 - r) - 1.0,
                                e[k], e[k + 1]);
  }
  rep.rhs_down = std::pow(rhs_down, 1.0 / q);

  // Averaging from above: Tail(t) = int_t^inf psi, zero beyond m.
  double up = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = e[k];
    const double b = e[k + 1];
    const double tail_left = mass - prefix[k];
    if (v[k] == 0.0) {
      if (tail_left > 0.0) {
        up += integrate_power(std::pow(tail_left, q), r * q - 1.0, a, b);
      }
      continue;
    }
    if (a == 0.0) {
      // Split off the exact power part so the t^{rq-1} endpoint
      // singularity never reaches the adaptive rule.
      up += integrate_power(std::pow(mass, q), r * q - 1.0, a, b);
      up += integrate_adaptive(
          [&](double t) {
            const double rem = std::max(mass - v[k] * t, 0.0);
            return std::pow(t, r * q - 1.0) *
                   (std::pow(rem, q) - std::pow(mass, q));
          },
          a, b, 1e-12, 48);
      continue;
    }
    up += integrate_adaptive(
        [&](double t) {
          const double rem = std::max(tail_left - v[k] * (t - a), 0.0);
          return std::pow(t, r * q) * std::pow(rem, q) / t;
        },
        a, b, 1e-12, 48);
  }
  rep.lhs_up = std::pow(up, 1.0 / q);

  double rhs_up = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) continue;
    rhs_up += integrate_power(std::pow(v[k], q), q * (1.0 + r) - 1.0, e[k],
                              e[k + 1]);
  }
  rep.rhs_up = std::pow(rhs_up, 1.0 / q);
  return rep;
}

}  // namespace anisym
