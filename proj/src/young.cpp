#include "young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "common.hpp"

namespace anisym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.718281828459045;

double clamped_log(double s) { return std::log(std::max(s, 1e-300)); }

// Positive power of log s, clamped so s slightly below e does not produce a
// negative base for fractional exponents.
double log_power(double s, double expo) {
  if (expo == 0.0) return 1.0;
  return std::pow(std::max(std::log(s), 1e-12), expo);
}

struct PurePower {
  double coeff;
  double p;
};

// Recognise objects whose samples agree with coeff * s^q of their own tail
// model: those are exact power functions and unlock closed-form paths.
std::optional<PurePower> detect_pure_power(const OneDimYoung& a) {
  if (a.plateau_edge() > 0.0) return std::nullopt;
  const TailModel& t = a.tail();
  if (std::abs(t.log_exp) > 1e-9) return std::nullopt;
  if (!(t.coeff > 0.0) || !(t.q >= 1.0 - 1e-9)) return std::nullopt;
  const auto& s = a.sample_points();
  const auto& v = a.sample_values();
  if (s.size() < 3) return std::nullopt;
  const std::size_t stride = std::max<std::size_t>(1, s.size() / 7);
  for (std::size_t k = 1; k < s.size(); k += stride) {
    const double model = t.coeff * std::pow(s[k], t.q);
    if (std::abs(v[k] - model) > 1e-11 * std::max({model, v[k], 1e-300})) {
      return std::nullopt;
    }
  }
  const double back_model = t.coeff * std::pow(s.back(), t.q);
  if (std::abs(v.back() - back_model) >
      1e-11 * std::max({back_model, v.back(), 1e-300})) {
    return std::nullopt;
  }
  return PurePower{t.coeff, t.q};
}

bool superlinear_tail(const TailModel& t) {
  return t.q > 1.0 + 1e-9 || (t.q > 1.0 - 1e-9 && t.log_exp > 1e-9);
}

// Two-window slope fit of  v ~ c s^q (log s)^a  on the last two decades of
// the sample set.  The window slope of log v against log s equals
// q + a * (window slope of loglog s against log s), which gives a 2x2 system.
TailModel fit_tail_model(const std::vector<double>& s,
                         const std::vector<double>& v) {
  TailModel tail;
  const double E = s.back();
  tail.edge = E;
  auto index_at = [&](double target) {
    std::size_t i = 1;
    while (i + 1 < s.size() && s[i] < target) ++i;
    return i;
  };
  const std::size_t i2 = s.size() - 1;
  const std::size_t i1 = index_at(E / 10.0);
  const std::size_t i0 = index_at(E / 100.0);
  auto window = [&](std::size_t lo, std::size_t hi, double& slope,
                    double& mu) {
    const double dls = clamped_log(s[hi]) - clamped_log(s[lo]);
    slope = (clamped_log(v[hi]) - clamped_log(v[lo])) / dls;
    mu = (std::log(std::max(std::log(s[hi]), 1e-12)) -
          std::log(std::max(std::log(s[lo]), 1e-12))) /
         dls;
  };
  if (E < 200.0 || i0 >= i1 || i1 >= i2 || !(v[i0] > 0.0)) {
    // Narrow range: single-window power fit without the log factor.
    double slope = 2.0, mu = 0.0;
    if (i1 < i2 && v[i1] > 0.0) window(i1, i2, slope, mu);
    tail.q = std::min(std::max(slope, 1.0), 500.0);
    tail.log_exp = 0.0;
    tail.coeff = v[i2] / std::pow(E, tail.q);
    return tail;
  }
  double m1, mu1, m2, mu2;
  window(i1, i2, m1, mu1);
  window(i0, i1, m2, mu2);
  double a = 0.0;
  if (std::abs(mu1 - mu2) > 1e-12) a = (m1 - m2) / (mu1 - mu2);
  if (!std::isfinite(a)) a = 0.0;
  a = std::min(std::max(a, -30.0), 30.0);
  double q = m1 - a * mu1;
  if (!std::isfinite(q)) {
    q = m1;
    a = 0.0;
  }
  q = std::min(std::max(q, 1.0), 500.0);
  tail.q = q;
  tail.log_exp = a;
  const double ln_c = clamped_log(v[i2]) - q * clamped_log(E) -
                      a * std::log(std::max(std::log(E), 1e-12));
  tail.coeff = std::exp(ln_c);
  return tail;
}

// Fenchel conjugate on an explicit y-grid; tail exponents transformed
// analytically.  Assumes the caller has verified superlinearity.
OneDimYoung conjugate_sampled(const OneDimYoung& a, double y_lo, double y_hi,
                              int m, bool install_exact) {
  const TailModel& t = a.tail();
  const auto& sp = a.sample_points();
  const double s1 = sp.size() > 1 ? sp[1] : 1.0;
  // Right-derivative of a at 0+: the conjugate vanishes on [0, m0].
  double m0 = a.eval(s1 * 1e-6) / (s1 * 1e-6);
  if (!(m0 > 1e-300)) m0 = 0.0;

  if (!(y_hi > 0.0)) {
    y_hi = a.derivative(a.sample_edge() * 1.000001);
    if (!std::isfinite(y_hi) || y_hi > 1e280) y_hi = 1e280;
  }
  if (!(y_lo > 0.0)) y_lo = std::max(m0 * (1.0 + 1e-9), y_hi * 1e-13);
  if (!(y_lo < y_hi)) y_lo = y_hi * 1e-13;

  std::vector<double> ys(1, 0.0), ws(1, 0.0);
  ys.reserve(m + 1);
  ws.reserve(m + 1);
  const double ratio = std::log(y_hi / y_lo);
  for (int k = 0; k < m; ++k) {
    const double y = y_lo * std::exp(ratio * k / double(m - 1));
    double w = conjugate_value_1d(a, y);
    if (!std::isfinite(w)) {
      throw NumericalError("conjugate value overflow while tabulating");
    }
    if (w < ws.back()) w = ws.back();
    ys.push_back(y);
    ws.push_back(w);
  }
  TailModel ct;
  const double qm1 = std::max(t.q - 1.0, 1e-6);
  ct.q = t.q / qm1;
  ct.log_exp = -t.log_exp / qm1;
  ct.edge = ys.back();
  const double ln_c = clamped_log(ws.back()) - ct.q * clamped_log(ys.back()) -
                      ct.log_exp * std::log(std::max(std::log(ys.back()), 1e-12));
  ct.coeff = std::exp(ln_c);
  OneDimYoung conj = OneDimYoung::from_samples(std::move(ys), std::move(ws),
                                               ct, m0);
  if (install_exact && a.has_exact()) {
    OneDimYoung base = a;
    conj.set_exact([base](double y) { return conjugate_value_1d(base, y); });
  }
  return conj;
}

// sup_{s >= 0} (s y - A(s)) for a raw callable (used by the separable
// conjugates of the parametric families).
double conjugate_value_fn(const std::function<double(double)>& A, double y) {
  y = std::abs(y);
  if (!(y > 0.0)) return 0.0;
  auto g = [&](double s) {
    const double val = A(s);
    return std::isfinite(val) ? s * y - val : -kInf;
  };
  double hi = 1.0;
  for (int guard = 0; guard < 400; ++guard) {
    if (!(g(2.0 * hi) > g(hi))) break;
    hi *= 2.0;
    if (hi > 1e290) return kInf;
  }
  hi *= 2.0;
  const double smax = maximize_concave(g, 0.0, hi, 1e-13);
  return std::max(0.0, g(smax));
}

// (lambda * s^p)^* evaluated at |y|; p == 1 gives the indicator conjugate.
double power_conjugate_value(double lambda, double p, double y) {
  y = std::abs(y);
  if (p <= 1.0 + 1e-12) {
    return y <= lambda * (1.0 + 1e-12) ? 0.0 : kInf;
  }
  const double pp = p / (p - 1.0);
  return std::pow(y, pp) / (pp * std::pow(lambda * p, pp / p));
}

}  // namespace

// ---------------------------------------------------------------------------
// TailModel

double TailModel::eval(double s) const {
  if (!(s > 0.0)) return 0.0;
  const double ls = std::max(std::log(s), 1e-12);
  double val = coeff * std::exp(q * std::log(s));
  if (log_exp != 0.0) val *= std::pow(ls, log_exp);
  return val;
}

double TailModel::derivative(double s) const {
  if (!(s > 0.0)) return 0.0;
  const double ls = std::max(std::log(s), 1e-12);
  return coeff * std::pow(s, q - 1.0) * std::pow(ls, log_exp - 1.0) *
         (q * ls + log_exp);
}

// ---------------------------------------------------------------------------
// OneDimYoung

OneDimYoung OneDimYoung::from_samples(std::vector<double> s,
                                      std::vector<double> v, TailModel tail,
                                      double plateau_edge) {
  if (s.size() != v.size() || s.size() < 2) {
    throw ValidationError("sample arrays must match and hold >= 2 points");
  }
  if (s.front() != 0.0 || v.front() != 0.0) {
    throw ValidationError("samples must start at (0, 0)");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) {
      throw ValidationError("sample abscissae must be strictly increasing");
    }
    if (!std::isfinite(v[i]) || v[i] < 0.0) {
      throw ValidationError("sample values must be finite and non-negative");
    }
    if (v[i] < v[i - 1]) {
      throw ValidationError("sample values must be non-decreasing");
    }
  }
  OneDimYoung out;
  double zero_edge = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (v[i] <= 0.0) zero_edge = s[i];
  }
  out.plateau_edge_ = std::max(plateau_edge, zero_edge);
  out.s_ = std::move(s);
  out.v_ = std::move(v);
  out.tail_ = tail;
  return out;
}

OneDimYoung OneDimYoung::from_function(const std::function<double(double)>& fn,
                                       double s_min, double s_max, int m) {
  if (!(s_min > 0.0) || !(s_max > s_min) || m < 16) {
    throw ValidationError("sampling requires 0 < s_min < s_max and m >= 16");
  }
  std::vector<double> s(1, 0.0), v(1, 0.0);
  s.reserve(m + 1);
  v.reserve(m + 1);
  const double ratio = std::log(s_max / s_min);
  for (int k = 0; k < m; ++k) {
    const double x = s_min * std::exp(ratio * k / double(m - 1));
    const double y = fn(x);
    if (!std::isfinite(y) || y > 1e290) break;  // truncate at overflow
    if (y < 0.0) throw ValidationError("Young function values must be >= 0");
    s.push_back(x);
    v.push_back(std::max(y, v.back()));
  }
  if (s.size() < 16) {
    throw ValidationError("too few finite samples for a usable table");
  }
  OneDimYoung out =
      from_samples(std::move(s), std::move(v), TailModel{}, 0.0);
  out.tail_ = fit_tail_model(out.s_, out.v_);
  out.exact_ = fn;
  return out;
}

OneDimYoung OneDimYoung::power(double coeff, double p) {
  if (!(coeff > 0.0) || !(p >= 1.0 - 1e-12)) {
    throw ValidationError("power profile requires coeff > 0 and p >= 1");
  }
  std::vector<double> s(1, 0.0), v(1, 0.0);
  const int m = 129;
  for (int k = 0; k < m; ++k) {
    const double x = 1e-6 * std::exp(std::log(1e12) * k / double(m - 1));
    s.push_back(x);
    v.push_back(coeff * std::pow(x, p));
  }
  TailModel tail;
  tail.q = p;
  tail.log_exp = 0.0;
  tail.coeff = coeff;
  tail.edge = s.back();
  OneDimYoung out = from_samples(std::move(s), std::move(v), tail, 0.0);
  out.exact_ = [coeff, p](double x) { return coeff * std::pow(x, p); };
  return out;
}

OneDimYoung OneDimYoung::power_log(double coeff, double p, double alpha,
                                   double shift) {
  if (!(coeff > 0.0) || !(shift >= kE - 1e-9)) {
    throw ValidationError("power-log profile requires coeff > 0, shift >= e");
  }
  if (!(p >= 1.0 - 1e-12) || (p <= 1.0 + 1e-12 && alpha < -1e-12)) {
    throw ValidationError("power-log profile requires p > 1, or p == 1 with "
                          "a non-negative log exponent");
  }
  auto fn = [coeff, p, alpha, shift](double x) {
    return coeff * std::pow(x, p) * std::pow(std::log(shift + x), alpha);
  };
  std::vector<double> s(1, 0.0), v(1, 0.0);
  const int m = 161;
  for (int k = 0; k < m; ++k) {
    const double x = 1e-6 * std::exp(std::log(1e12) * k / double(m - 1));
    s.push_back(x);
    v.push_back(fn(x));
  }
  TailModel tail;
  tail.q = p;
  tail.log_exp = alpha;
  tail.edge = s.back();
  tail.coeff = v.back() / (std::pow(tail.edge, p) * log_power(tail.edge, alpha));
  OneDimYoung out = from_samples(std::move(s), std::move(v), tail, 0.0);
  out.exact_ = fn;
  return out;
}

double OneDimYoung::interp(double s) const {
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  if (it == s_.begin()) return v_.front();
  if (it == s_.end()) return v_.back();
  const std::size_t j = std::size_t(it - s_.begin());
  const double t = (s - s_[j - 1]) / (s_[j] - s_[j - 1]);
  return v_[j - 1] + t * (v_[j] - v_[j - 1]);
}

double OneDimYoung::eval(double s) const {
  s = std::abs(s);
  if (s <= plateau_edge_ || s == 0.0) return 0.0;
  if (exact_) return std::max(0.0, exact_(s));
  if (s_.empty()) return tail_.eval(s);
  if (s > s_.back()) return tail_.eval(s);
  return interp(s);
}

double OneDimYoung::derivative(double s) const {
  s = std::abs(s);
  if (exact_) {
    const double h = std::max(s, 1e-8) * 1e-7;
    if (s <= h) return (eval(s + h) - eval(s)) / h;
    return (eval(s + h) - eval(s - h)) / (2.0 * h);
  }
  if (s_.empty() || s > s_.back()) return tail_.derivative(s);
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t j = it == s_.end() ? s_.size() - 1 : std::size_t(it - s_.begin());
  if (j == 0) j = 1;
  return (v_[j] - v_[j - 1]) / (s_[j] - s_[j - 1]);
}

double OneDimYoung::inverse(double y) const {
  if (!(y > 0.0)) return plateau_edge_;
  if (!exact_) {
    if (!v_.empty() && y <= v_.back()) {
      const auto it = std::lower_bound(v_.begin(), v_.end(), y);
      std::size_t j = std::size_t(it - v_.begin());
      if (j == 0) return s_.front();
      const double dv = v_[j] - v_[j - 1];
      if (dv <= 0.0) return s_[j - 1];
      return s_[j - 1] + (y - v_[j - 1]) * (s_[j] - s_[j - 1]) / dv;
    }
    // Solve the tail model by a log-space fixed point.
    const double ln_y = std::log(y);
    const double ln_c = clamped_log(tail_.coeff);
    double ln_s = (ln_y - ln_c) / tail_.q;
    for (int it = 0; it < 60; ++it) {
      const double lls = std::log(std::max(ln_s, 1e-6));
      ln_s = (ln_y - ln_c - tail_.log_exp * lls) / tail_.q;
    }
    double guess = std::exp(ln_s);
    if (std::isfinite(guess) && guess > 0.0) return guess;
  }
  double lo = plateau_edge_;
  double hi = std::max(1.0, 2.0 * lo + 1.0);
  int guard = 0;
  while (eval(hi) < y) {
    hi *= 2.0;
    if (++guard > 1100 || hi > 1e300) {
      throw NumericalError("inverse target exceeds representable range");
    }
  }
  return solve_increasing([this](double s) { return eval(s); }, y, lo, hi,
                          1e-14);
}

// ---------------------------------------------------------------------------
// Conjugation

double conjugate_value_1d(const OneDimYoung& a, double y) {
  y = std::abs(y);
  if (!(y > 0.0)) return 0.0;
  auto g = [&](double s) {
    const double val = a.eval(s);
    return std::isfinite(val) ? s * y - val : -kInf;
  };
  double hi = std::max(1.0, 2.0 * a.plateau_edge() + 1.0);
  int guard = 0;
  while (guard++ < 2200) {
    const double d = a.derivative(hi);
    if (!(d < y)) break;
    hi *= 1.9;
    if (hi > 1e290) return kInf;
  }
  const double smax = maximize_concave(g, 0.0, hi, 1e-13);
  return std::max(0.0, g(smax));
}

OneDimYoung conjugate_1d(const OneDimYoung& a) {
  if (!superlinear_tail(a.tail())) {
    throw ValidationError(
        "conjugate requires superlinear growth; a linear tail conjugates to "
        "an indicator, not a Young function");
  }
  if (const auto pp = detect_pure_power(a); pp && pp->p > 1.0 + 1e-9) {
    const double p = pp->p;
    const double conj_p = p / (p - 1.0);
    const double conj_coeff =
        1.0 / (conj_p * std::pow(pp->coeff * p, conj_p - 1.0));
    return OneDimYoung::power(conj_coeff, conj_p);
  }
  return conjugate_sampled(a, 0.0, 0.0, 400, true);
}

// ---------------------------------------------------------------------------
// YoungSpec

YoungSpec::YoungSpec(int dim, Family family)
    : dim_(dim), family_(std::move(family)) {
  if (dim_ < 1) throw ValidationError("dimension must be >= 1");
  if (const auto* ps = std::get_if<PowerSumSpec>(&family_)) {
    if (int(ps->p.size()) != dim_ || int(ps->lambda.size()) != dim_) {
      throw ValidationError("exponent and weight lists must have length N");
    }
    for (double p : ps->p) {
      if (!(p >= 1.0 - 1e-12)) {
        throw ValidationError("power-sum exponents must satisfy p_i >= 1");
      }
    }
    for (double l : ps->lambda) {
      if (!(l > 0.0)) {
        throw ValidationError("power-sum weights must be positive");
      }
    }
  } else if (const auto* lp = std::get_if<LogPerturbedSumSpec>(&family_)) {
    if (int(lp->p.size()) != dim_ || int(lp->alpha.size()) != dim_) {
      throw ValidationError("exponent and log-exponent lists must match N");
    }
    if (!(lp->shift >= kE - 1e-9)) {
      throw ValidationError("log shift must be at least e");
    }
    bool superlinear = false;
    for (int i = 0; i < dim_; ++i) {
      const double p = lp->p[i], al = lp->alpha[i];
      if (!(p >= 1.0 - 1e-12)) {
        throw ValidationError("log-perturbed exponents must satisfy p_i >= 1");
      }
      if (p <= 1.0 + 1e-12 && al < -1e-12) {
        throw ValidationError("p_i == 1 requires a non-negative log exponent");
      }
      if (p > 1.0 + 1e-12 || al > 1e-12) superlinear = true;
    }
    if (!superlinear) {
      throw ValidationError(
          "all-linear log-free sums are excluded: growth must exceed |xi|");
    }
  } else if (const auto* tc = std::get_if<TwoDimCoupledSpec>(&family_)) {
    if (dim_ != 2) throw ValidationError("coupled family is two-dimensional");
    if (!(tc->alpha >= 1.0 - 1e-12) || !(tc->beta >= 1.0 - 1e-12)) {
      throw ValidationError("coupled exponents must be >= 1");
    }
    if (tc->beta <= 1.0 + 1e-12 && tc->delta < -1e-12) {
      throw ValidationError("beta == 1 requires a non-negative log exponent");
    }
    if (!(tc->shift >= kE - 1e-9)) {
      throw ValidationError("log shift must be at least e");
    }
    if (!(tc->alpha > 1.0 + 1e-12 || tc->beta > 1.0 + 1e-12 ||
          tc->delta > 1e-12)) {
      throw ValidationError("coupled family must grow faster than |xi|");
    }
  } else if (const auto* rd = std::get_if<RadialSpec>(&family_)) {
    (void)rd;
  } else if (const auto* tb = std::get_if<TabulatedSpec>(&family_)) {
    if (int(tb->addends.size()) != dim_) {
      throw ValidationError("tabulated family needs one addend per axis");
    }
  }
}

YoungSpec YoungSpec::power_sum(std::vector<double> p,
                               std::vector<double> lambda) {
  const int dim = int(p.size());
  return YoungSpec(dim, PowerSumSpec{std::move(p), std::move(lambda)});
}

YoungSpec YoungSpec::log_perturbed_sum(std::vector<double> p,
                                       std::vector<double> alpha,
                                       double shift) {
  const int dim = int(p.size());
  return YoungSpec(dim,
                   LogPerturbedSumSpec{std::move(p), std::move(alpha), shift});
}

YoungSpec YoungSpec::two_dim_coupled(double alpha, double beta, double delta,
                                     double shift) {
  return YoungSpec(2, TwoDimCoupledSpec{alpha, beta, delta, shift});
}

YoungSpec YoungSpec::radial(int dim, OneDimYoung profile) {
  return YoungSpec(dim, RadialSpec{std::move(profile)});
}

YoungSpec YoungSpec::tabulated(std::vector<OneDimYoung> addends) {
  const int dim = int(addends.size());
  return YoungSpec(dim, TabulatedSpec{std::move(addends)});
}

bool YoungSpec::separable() const {
  return std::holds_alternative<PowerSumSpec>(family_) ||
         std::holds_alternative<LogPerturbedSumSpec>(family_) ||
         std::holds_alternative<TabulatedSpec>(family_);
}

double YoungSpec::eval(const std::vector<double>& xi) const {
  if (int(xi.size()) != dim_) {
    throw ValidationError("argument dimension mismatch");
  }
  if (const auto* ps = std::get_if<PowerSumSpec>(&family_)) {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
      sum += ps->lambda[i] * std::pow(std::abs(xi[i]), ps->p[i]);
    }
    return sum;
  }
  if (const auto* lp = std::get_if<LogPerturbedSumSpec>(&family_)) {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double t = std::abs(xi[i]);
      if (t == 0.0) continue;
      sum += std::pow(t, lp->p[i]) *
             std::pow(std::log(lp->shift + t), lp->alpha[i]);
    }
    return sum;
  }
  if (const auto* tc = std::get_if<TwoDimCoupledSpec>(&family_)) {
    const double u = std::abs(xi[0] - xi[1]);
    const double w = std::abs(xi[0]);
    double val = u > 0.0 ? std::pow(u, tc->alpha) : 0.0;
    if (w > 0.0) {
      val += std::pow(w, tc->beta) *
             std::pow(std::log(tc->shift + w), tc->delta);
    }
    return val;
  }
  if (const auto* rd = std::get_if<RadialSpec>(&family_)) {
    double norm2 = 0.0;
    for (double x : xi) norm2 += x * x;
    return rd->profile.eval(std::sqrt(norm2));
  }
  const auto& tb = std::get<TabulatedSpec>(family_);
  double sum = 0.0;
  for (int i = 0; i < dim_; ++i) sum += tb.addends[i].eval(xi[i]);
  return sum;
}

double YoungSpec::conjugate_eval(const std::vector<double>& eta) const {
  if (int(eta.size()) != dim_) {
    throw ValidationError("argument dimension mismatch");
  }
  if (const auto* ps = std::get_if<PowerSumSpec>(&family_)) {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
      sum += power_conjugate_value(ps->lambda[i], ps->p[i], eta[i]);
    }
    return sum;
  }
  if (const auto* lp = std::get_if<LogPerturbedSumSpec>(&family_)) {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double p = lp->p[i], al = lp->alpha[i], c = lp->shift;
      sum += conjugate_value_fn(
          [p, al, c](double s) {
            return s > 0.0 ? std::pow(s, p) * std::pow(std::log(c + s), al)
                           : 0.0;
          },
          eta[i]);
    }
    return sum;
  }
  if (const auto* tc = std::get_if<TwoDimCoupledSpec>(&family_)) {
    // With u = xi_1 - xi_2, v = xi_1 (a determinant-one change of variables)
    // the supremum splits:  Phi*(eta) = (|.|^alpha)*(|eta_2|)
    //                                  + (|.|^beta log^delta)*(|eta_1+eta_2|).
    const double beta = tc->beta, delta = tc->delta, c = tc->shift;
    double val = power_conjugate_value(1.0, tc->alpha, eta[1]);
    val += conjugate_value_fn(
        [beta, delta, c](double s) {
          return s > 0.0
                     ? std::pow(s, beta) * std::pow(std::log(c + s), delta)
                     : 0.0;
        },
        eta[0] + eta[1]);
    return val;
  }
  if (const auto* rd = std::get_if<RadialSpec>(&family_)) {
    double norm2 = 0.0;
    for (double x : eta) norm2 += x * x;
    return conjugate_value_1d(rd->profile, std::sqrt(norm2));
  }
  const auto& tb = std::get<TabulatedSpec>(family_);
  double sum = 0.0;
  for (int i = 0; i < dim_; ++i) {
    sum += conjugate_value_1d(tb.addends[i], eta[i]);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Reduction constants and pipeline

KlimovConstants power_sum_klimov(const std::vector<double>& p,
                                 const std::vector<double>& lambda, int n) {
  if (int(p.size()) != n || int(lambda.size()) != n || n < 1) {
    throw ValidationError("need n exponents and n weights");
  }
  double inv_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(p[i] >= 1.0 - 1e-12)) {
      throw ValidationError("exponents must satisfy p_i >= 1");
    }
    if (!(lambda[i] > 0.0)) {
      throw ValidationError("weights must be positive");
    }
    inv_sum += 1.0 / p[i];
  }
  const double p_bar = double(n) / inv_sum;
  if (!(p_bar > 1.0 + 1e-12)) {
    throw ValidationError(
        "the harmonic mean of the exponents must exceed 1 for the reduced "
        "profile to be superlinear");
  }
  const double p_bar_conj = p_bar / (p_bar - 1.0);
  double ln_lambda =
      p_bar * std::log(2.0) + (p_bar - 1.0) * std::log(p_bar - 1.0) -
      p_bar * std::log(p_bar);
  double bracket = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pi = p[i];
    bracket += std::log(pi) / pi;
    if (pi > 1.0 + 1e-14) {
      const double pip = pi / (pi - 1.0);
      bracket += std::log(pip) / pip + std::lgamma(1.0 + 1.0 / pip);
    }
    bracket += std::log(lambda[i]) / pi;
  }
  bracket -= std::log(unit_ball_volume(n));
  bracket -= std::lgamma(1.0 + double(n) / p_bar_conj);
  ln_lambda += bracket * p_bar / double(n);
  return KlimovConstants{p_bar, std::exp(ln_lambda)};
}

namespace {

// Sublevel-set measure of a separable sum  sum_i B_i(x_i)  via iterated
// one-dimensional slicing (the B_i are cheap piecewise-linear tables).
struct SeparableMeasure {
  std::vector<OneDimYoung> B;

  double measure(double t) const { return slice(int(B.size()) - 1, t); }

  double slice(int k, double t) const {
    if (!(t > 0.0)) return 0.0;
    if (k == 0) return 2.0 * B[0].inverse(t);
    const double xbar = B[k].inverse(t);
    if (!(xbar > 0.0)) return 0.0;
    auto f = [&](double x) { return slice(k - 1, t - B[k].eval(x)); };
    const double tol = k == int(B.size()) - 1 ? 3e-8 : 1e-6;
    return 2.0 * integrate_adaptive(f, 0.0, xbar, tol, 36);
  }
};

OneDimYoung cheap_conjugate_table(const OneDimYoung& a, double y_lo,
                                  double y_hi, int m) {
  if (!superlinear_tail(a.tail())) {
    throw NumericalError(
        "numeric reduction needs every addend to grow strictly faster than "
        "|xi| (conjugate tails would be exponential)");
  }
  return conjugate_sampled(a, y_lo, y_hi, m, /*install_exact=*/false);
}

OneDimYoung run_reduction_pipeline(const YoungSpec& spec) {
  const int N = spec.dim();
  const double wN = unit_ball_volume(N);

  std::function<double(double)> meas;
  std::shared_ptr<SeparableMeasure> sep;
  std::shared_ptr<OneDimYoung> radial_conj;

  if (const auto* rd = std::get_if<RadialSpec>(&spec.family())) {
    radial_conj = std::make_shared<OneDimYoung>(
        cheap_conjugate_table(rd->profile, 1e-7, 1e9, 700));
    meas = [radial_conj, wN, N](double t) {
      return t > 0.0 ? wN * std::pow(radial_conj->inverse(t), N) : 0.0;
    };
  } else {
    std::vector<OneDimYoung> addends;
    if (const auto* ps = std::get_if<PowerSumSpec>(&spec.family())) {
      for (int i = 0; i < N; ++i) {
        addends.push_back(OneDimYoung::power(ps->lambda[i], ps->p[i]));
      }
    } else if (const auto* lp =
                   std::get_if<LogPerturbedSumSpec>(&spec.family())) {
      for (int i = 0; i < N; ++i) {
        addends.push_back(
            OneDimYoung::power_log(1.0, lp->p[i], lp->alpha[i], lp->shift));
      }
    } else if (const auto* tc =
                   std::get_if<TwoDimCoupledSpec>(&spec.family())) {
      // Measure-preserving shear (u, v) = (xi_1 - xi_2, xi_1) decouples the
      // family, so its conjugate sublevel sets have separable measure.
      addends.push_back(OneDimYoung::power(1.0, tc->alpha));
      addends.push_back(
          OneDimYoung::power_log(1.0, tc->beta, tc->delta, tc->shift));
    } else {
      addends = std::get<TabulatedSpec>(spec.family()).addends;
    }
    sep = std::make_shared<SeparableMeasure>();
    for (const auto& a : addends) {
      sep->B.push_back(cheap_conjugate_table(a, 1e-7, 1e9, 700));
    }
    meas = [sep](double t) { return sep->measure(t); };
  }

  // Radial profile of the rearranged conjugate: C(rho) solves
  // measure(C) = wN rho^N, sampled on an ascending log grid.
  const int m_rho = 241;
  const double rho_lo = 1e-4, rho_hi = 1e4;
  std::vector<double> rho(1, 0.0), cval(1, 0.0);
  rho.reserve(m_rho + 1);
  cval.reserve(m_rho + 1);
  double t_prev = 0.0;
  for (int k = 0; k < m_rho; ++k) {
    const double r = rho_lo * std::exp(std::log(rho_hi / rho_lo) * k /
                                       double(m_rho - 1));
    const double target = wN * std::pow(r, N);
    double hi = std::max(t_prev * 1.5, 1e-12);
    int guard = 0;
    while (meas(hi) < target) {
      hi *= 2.7;
      if (++guard > 500 || hi > 1e290) {
        throw NumericalError("sublevel measure saturated before reaching the "
                             "requested radius");
      }
    }
    const double t = solve_increasing(meas, target, t_prev, hi, 3e-9);
    rho.push_back(r);
    cval.push_back(std::max(t, cval.back()));
    t_prev = t;
  }
  const TailModel ctail = fit_tail_model(rho, cval);
  const OneDimYoung sym =
      OneDimYoung::from_samples(std::move(rho), std::move(cval), ctail, 0.0);

  // Conjugate back; cap the sampled range so downstream users hit the tail
  // model (with analytically transformed exponents) past moderate arguments.
  return conjugate_sampled(sym, 1e-4, 5e3, 321, /*install_exact=*/false);
}

}  // namespace

OneDimYoung klimov_symmetrize_numeric(const YoungSpec& spec) {
  return run_reduction_pipeline(spec);
}

OneDimYoung klimov_symmetrize(const YoungSpec& spec) {
  if (const auto* ps = std::get_if<PowerSumSpec>(&spec.family())) {
    const KlimovConstants c =
        power_sum_klimov(ps->p, ps->lambda, spec.dim());
    return OneDimYoung::power(c.lambda, c.p_bar);
  }
  if (const auto* rd = std::get_if<RadialSpec>(&spec.family())) {
    // A radial profile is a fixed point: conjugating twice returns its
    // convex closure exactly.
    return conjugate_1d(conjugate_1d(rd->profile));
  }
  if (const auto* lp = std::get_if<LogPerturbedSumSpec>(&spec.family())) {
    OneDimYoung num = run_reduction_pipeline(spec);
    // Tag the tail with the predicted exponents: power = harmonic mean,
    // log power = (p_bar / N) * sum alpha_i / p_i.
    double inv_sum = 0.0, log_sum = 0.0;
    for (std::size_t i = 0; i < lp->p.size(); ++i) {
      inv_sum += 1.0 / lp->p[i];
      log_sum += lp->alpha[i] / lp->p[i];
    }
    const double p_bar = double(lp->p.size()) / inv_sum;
    TailModel tag;
    tag.q = p_bar;
    tag.log_exp = (p_bar / double(spec.dim())) * log_sum;
    tag.edge = num.sample_edge();
    tag.coeff = num.sample_values().back() /
                (std::pow(tag.edge, tag.q) * log_power(tag.edge, tag.log_exp));
    return OneDimYoung::from_samples(num.sample_points(), num.sample_values(),
                                     tag, num.plateau_edge());
  }
  return run_reduction_pipeline(spec);
}

// ---------------------------------------------------------------------------
// PsiMap

PsiMap::PsiMap(const OneDimYoung& phi) : phi_(&phi), sup_(kInf) {
  if (const auto pp = detect_pure_power(phi)) {
    if (!(pp->p > 1.0 + 1e-9)) {
      throw ValidationError(
          "phi(s)/s must vanish as s -> 0+: linear growth is inadmissible");
    }
    power_exponent_ = pp->p;
    power_coeff_ = pp->coeff;
    return;
  }
  auto raw = [&](double s) { return phi.eval(s) / s; };
  if (phi.plateau_edge() <= 0.0) {
    const auto& sp = phi.sample_points();
    const double s1 = sp.size() > 1 ? sp[1] : 1e-6;
    const double edge = std::max(phi.sample_edge(), s1 * 100.0);
    const double mid = std::sqrt(s1 * edge);
    if (!(raw(s1) < 0.9 * raw(mid))) {
      throw ValidationError(
          "phi(s)/s must vanish as s -> 0+: linear growth near the origin is "
          "inadmissible");
    }
  }
  const double va = raw(1e12), vb = raw(1.3e13);
  sup_ = (vb > va * (1.0 + 1e-6)) ? kInf : vb;
}

double PsiMap::eval(double s) const {
  if (!(s > 0.0) || s <= phi_->plateau_edge()) return 0.0;
  if (power_exponent_) {
    return *power_coeff_ * std::pow(s, *power_exponent_ - 1.0);
  }
  return phi_->eval(s) / s;
}

double PsiMap::inverse(double r) const {
  if (!(r > 0.0)) return phi_->plateau_edge();
  if (r >= sup_) {
    throw NumericalError(
        "flux level reaches the supremum of phi(s)/s: the radial problem has "
        "no solution for this data");
  }
  if (power_exponent_) {
    return std::pow(r / *power_coeff_, 1.0 / (*power_exponent_ - 1.0));
  }
  double lo = phi_->plateau_edge();
  double hi = std::max(1.0, 2.0 * lo + 1.0);
  int guard = 0;
  while (eval(hi) < r) {
    hi *= 2.0;
    if (++guard > 1100 || hi > 1e300) {
      throw NumericalError("flux level unreachable by phi(s)/s");
    }
  }
  return solve_increasing([this](double s) { return eval(s); }, r, lo, hi,
                          1e-13);
}

PsiMap psi(const OneDimYoung& phi) { return PsiMap(phi); }

// ---------------------------------------------------------------------------
// ConjugateInverse

ConjugateInverse::ConjugateInverse(const OneDimYoung& phi) {
  if (const auto pp = detect_pure_power(phi); pp && pp->p > 1.0 + 1e-9) {
    power_exponent_ = pp->p;
    power_coeff_ = pp->coeff;
  }
  conj_ = conjugate_1d(phi);
}

double ConjugateInverse::eval(double r) const {
  if (!(r > 0.0)) return 0.0;
  if (power_exponent_) {
    const double p = *power_exponent_;
    const double pp = p / (p - 1.0);
    return std::pow(p * *power_coeff_, 1.0 / p) * std::pow(pp * r, 1.0 / pp);
  }
  return conj_.inverse(r);
}

ConjugateInverse conjugate_inverse(const OneDimYoung& phi) {
  return ConjugateInverse(phi);
}

// ---------------------------------------------------------------------------
// Growth classification

namespace {

// Prefix integral table for int_0^r f with a power extrapolation below the
// first node (exponent e0 measured near zero).
struct CumulativeTable {
  std::vector<double> nodes;
  std::vector<double> prefix;
  std::function<double(double)> f;
  double e0 = 0.0;

  double head(double r) const { return f(r) * r / (1.0 + e0); }

  double eval(double r) const {
    if (!(r > 0.0)) return 0.0;
    if (r <= nodes.front()) return head(r);
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    const std::size_t j = std::size_t(it - nodes.begin()) - 1;
    double base = prefix[j];
    if (j + 1 < nodes.size() && r > nodes[j]) {
      base += integrate_adaptive(f, nodes[j], r, 1e-10, 40);
    } else if (j + 1 == nodes.size() && r > nodes.back()) {
      base += integrate_adaptive(f, nodes.back(), r, 1e-10, 40);
    }
    return base;
  }

  // Smallest r with eval(r) = target (target within the table range).
  double invert(double target) const {
    if (!(target > 0.0)) return 0.0;
    if (target <= prefix.front()) {
      return nodes.front() * std::pow(target / prefix.front(), 1.0 / (1.0 + e0));
    }
    double lo = nodes.front(), hi = nodes.back();
    if (target > prefix.back()) {
      double cur = prefix.back();
      lo = nodes.back();
      hi = lo;
      int guard = 0;
      while (cur < target) {
        const double next = hi * 2.0;
        cur += integrate_adaptive(f, hi, next, 1e-10, 40);
        lo = hi;
        hi = next;
        if (++guard > 400 || hi > 1e300) {
          throw NumericalError("cumulative integral saturates below target");
        }
      }
    } else {
      const auto it =
          std::lower_bound(prefix.begin(), prefix.end(), target);
      const std::size_t j = std::size_t(it - prefix.begin());
      lo = j == 0 ? nodes.front() : nodes[j - 1];
      hi = nodes[j];
    }
    return solve_increasing([this](double r) { return eval(r); }, target, lo,
                            hi, 1e-11);
  }
};

}  // namespace

OneDimYoung normalize_near_zero(const OneDimYoung& phi, double knot) {
  if (!(knot > 0.0)) throw ValidationError("secant knot must be positive");
  const double vk = phi.eval(knot);
  if (!(vk > 0.0)) {
    throw ValidationError("secant knot must lie beyond the zero set of phi");
  }
  const double slope = vk / knot;
  std::vector<double> s{0.0, 0.5 * knot, knot};
  std::vector<double> v{0.0, 0.5 * vk, vk};
  for (std::size_t i = 0; i < phi.sample_points().size(); ++i) {
    const double x = phi.sample_points()[i];
    if (x > knot * (1.0 + 1e-12)) {
      s.push_back(x);
      v.push_back(std::max(phi.sample_values()[i], v.back()));
    }
  }
  OneDimYoung out = OneDimYoung::from_samples(std::move(s), std::move(v),
                                              phi.tail(), 0.0);
  const OneDimYoung base = phi;
  out.set_exact([base, knot, slope](double x) {
    return x <= knot ? slope * x : base.eval(x);
  });
  return out;
}

SobolevRegime sobolev_classifier(const OneDimYoung& phi, int n,
                                 bool normalize_at_zero, double knot) {
  if (n < 2) {
    throw ValidationError("growth classification needs dimension >= 2");
  }
  const double inv_nm1 = 1.0 / double(n - 1);
  auto integrand_of = [inv_nm1](const OneDimYoung* f) {
    return [f, inv_nm1](double s) {
      const double val = f->eval(s);
      if (!(val > 0.0)) return kInf;
      return std::pow(s / val, inv_nm1);
    };
  };

  SobolevRegime out;

  // Tail test: convergence of the integral to infinity means every field
  // with finite reduced energy is essentially bounded.
  {
    auto I = integrand_of(&phi);
    const double S1 = 1e9, S2 = 1e11;
    const double i1 = I(S1), i2 = I(S2);
    const double e_inf = std::log(i2 / i1) / std::log(S2 / S1);
    bool bounded = e_inf < -1.0 - 1e-6;
    if (!bounded && std::abs(e_inf + 1.0) <= 1e-6) {
      const double lam = (std::log(i2) - std::log(i1) +
                          (std::log(S2) - std::log(S1))) /
                         (std::log(std::log(S2)) - std::log(std::log(S1)));
      bounded = lam < -1.0 - 1e-6;
    }
    if (bounded) {
      out.bounded_regime = true;
      return out;
    }
  }

  // Zero test: H needs the integral to converge at the origin.
  OneDimYoung working = phi;
  {
    auto I = integrand_of(&working);
    const double sa = 1e-8, sb = 1e-5;
    double e0 = std::log(I(sb) / I(sa)) / std::log(sb / sa);
    const bool divergent = !(std::isfinite(e0)) || e0 <= -1.0 + 1e-6 ||
                           working.plateau_edge() > 0.0;
    if (divergent) {
      if (!normalize_at_zero) {
        throw ValidationError(
            "integral condition at zero fails: renormalization of phi near "
            "zero (secant replacement) is required");
      }
      working = normalize_near_zero(phi, knot);
      out.renormalized_at_zero = true;
    }
  }

  auto table = std::make_shared<CumulativeTable>();
  {
    OneDimYoung held = working;
    table->f = [held, inv_nm1](double s) {
      const double val = held.eval(s);
      if (!(val > 0.0)) return kInf;
      return std::pow(s / val, inv_nm1);
    };
    const double sa = 1e-8, sb = 1e-5;
    table->e0 =
        std::log(table->f(sb) / table->f(sa)) / std::log(sb / sa);
    if (!std::isfinite(table->e0) || table->e0 <= -1.0 + 1e-9) {
      table->e0 = 0.0;
    }
    const int m = 441;
    const double r_lo = 1e-10, r_hi = 1e12;
    table->nodes.resize(m);
    table->prefix.resize(m);
    for (int k = 0; k < m; ++k) {
      table->nodes[k] =
          r_lo * std::exp(std::log(r_hi / r_lo) * k / double(m - 1));
    }
    table->prefix[0] = table->head(table->nodes[0]);
    for (int k = 1; k < m; ++k) {
      table->prefix[k] =
          table->prefix[k - 1] +
          integrate_adaptive(table->f, table->nodes[k - 1], table->nodes[k],
                             1e-10, 40);
    }
  }

  const double conj_expo = double(n) / double(n - 1);  // N'
  out.H = [table, conj_expo](double r) {
    return std::pow(table->eval(r), 1.0 / conj_expo);
  };
  out.H_inverse = [table, conj_expo](double y) {
    if (!(y > 0.0)) return 0.0;
    return table->invert(std::pow(y, conj_expo));
  };

  {
    const double y_lo = out.H(1e-9);
    const double y_hi = out.H(1e11);
    OneDimYoung held = working;
    auto h_inv = out.H_inverse;
    out.phi_N = OneDimYoung::from_function(
        [held, h_inv](double y) { return held.eval(h_inv(y)); },
        std::max(y_lo, 1e-12), y_hi, 200);
  }
  return out;
}

}  // namespace anisym
