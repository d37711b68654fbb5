#include "common.hpp"

#include <cmath>
#include <limits>

namespace anisym {

double unit_ball_volume(int n) {
  if (n < 1) throw ValidationError("unit_ball_volume: dimension must be >= 1");
  return std::pow(kPi, 0.5 * n) / std::tgamma(1.0 + 0.5 * n);
}

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double lo, hi;     // original endpoints (evaluations are nudged inward)
  double nudge;      // absolute inward shift applied at the endpoints

  double eval(double x) const {
    if (x <= lo) x = lo + nudge;
    if (x >= hi) x = hi - nudge;
    const double y = (*f)(x);
    if (std::isnan(y)) {
      throw NumericalError("integrate_adaptive: integrand is NaN");
    }
    return y;
  }
};

double simpson_recurse(const SimpsonState& st, double a, double fa, double b,
                       double fb, double m, double fm, double whole,
                       double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.eval(lm), frm = st.eval(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double sum = left + right;
  const double err = sum - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return sum + err / 15.0;
  }
  return simpson_recurse(st, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                         depth - 1) +
         simpson_recurse(st, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                         depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("integrate_adaptive: requires finite a < b");
  }
  SimpsonState st{&f, a, b, (b - a) * 1e-13};
  const double m = 0.5 * (a + b);
  const double fa = st.eval(a), fb = st.eval(b), fm = st.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::max({std::abs(whole), (b - a), 1e-30});
  return simpson_recurse(st, a, fa, b, fb, m, fm, whole, rel_tol * scale,
                         max_depth);
}

double integrate_power(double c, double expo, double a, double b) {
  if (!(0.0 <= a && a < b)) {
    throw ValidationError("integrate_power: requires 0 <= a < b");
  }
  if (c == 0.0) return 0.0;
  if (a == 0.0 && expo <= -1.0) {
    return c > 0.0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
  }
  if (expo == -1.0) return c * std::log(b / a);
  const double e1 = expo + 1.0;
  const double upper = std::pow(b, e1);
  const double lower = a == 0.0 ? 0.0 : std::pow(a, e1);
  return c * (upper - lower) / e1;
}

double solve_increasing(const std::function<double(double)>& f, double target,
                        double lo, double hi, double rel_tol) {
  if (!(lo < hi)) throw ValidationError("solve_increasing: requires lo < hi");
  double flo = f(lo), fhi = f(hi);
  if (target <= flo) return lo;
  if (target >= fhi) return hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double maximize_concave(const std::function<double(double)>& f, double lo,
                        double hi, double rel_tol) {
  if (!(lo < hi)) throw ValidationError("maximize_concave: requires lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 300 && (b - a) > rel_tol * std::max(1.0, std::abs(b));
       ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = UINT64_C(0xcbf29ce484222325);
  for (unsigned char ch : bytes) {
    hash ^= static_cast<std::uint64_t>(ch);
    hash *= UINT64_C(0x100000001b3);
  }
  return hash;
}

bool nearly_equal(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <=
         rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace anisym
