#ifndef ANISYM_NORMS_HPP
#define ANISYM_NORMS_HPP

// Rearrangement-invariant norms of step profiles, and the two Hardy-type
// inequalities used to prove the summability estimates.
//
// Profiles are rearranged internally (sorted decreasing) when not already
// non-increasing, so every functional below depends only on the
// distribution of the input values.  Power pieces are integrated exactly;
// non-elementary pieces fall back to substitution + adaptive quadrature.

#include "profiles.hpp"
#include "young.hpp"

namespace anisym {

// Lorentz functional:
//   q <  inf : ( int_0^m [ s^{1/p} f*(s) ]^q  ds/s )^{1/q}
//   q == inf : sup_s  s^{1/p} f*(s)
// p == inf is admitted; combinations whose integral diverges return +inf.
double lorentz_norm(const StepProfile& f, double p, double q);

// Lorentz-Zygmund functional with weight (1 + log(m/s))^alpha and an
// optional iterated-log factor (1 + log(1 + log(m/s)))^beta_loglog:
//   ( int_0^m [ s^{1/p} (1+log(m/s))^alpha (1+log(1+log(m/s)))^beta
//               f*(s) ]^q ds/s )^{1/q}.
// For p == inf, the space is nontrivial only when q < inf and
// alpha + 1/q < 0 (or q == inf, alpha <= 0); violations return +inf.
double lorentz_zygmund_norm(const StepProfile& f, double p, double q,
                            double alpha, double beta_loglog = 0.0);

// Luxemburg functional of the Young function A on (0, m):
//   inf { t > 0 :  int_0^m A(|f(s)|/t) ds <= 1 }.
double luxemburg_norm(const StepProfile& f, const OneDimYoung& a);

// Weighted Luxemburg functional of s |-> w(s) f*(s) used by the
// Orlicz-Lorentz norm; w must be positive and finite on (0, m).
double luxemburg_norm_weighted(const StepProfile& f,
                               const std::function<double(double)>& weight,
                               const OneDimYoung& a);

// Young function B generating the Orlicz-Lorentz space associated with A in
// dimension n: b^{-1} is derived from a^{-1} = (A')^{-1} by the radially
// reduced capacity integral
//   b^{-1}(s) = ( int_{a^{-1}(s)}^inf ( int_0^r a^{-1/(n-1)} )^{-n}
//                 dr / a(r)^{n'} )^{1/(1-n)} .
// Requires int_0 (s/A(s))^{1/(n-1)} ds < inf; when that fails and
// normalize_at_zero is set, A is first replaced near zero by its secant.
OneDimYoung orlicz_lorentz_generator(const OneDimYoung& a, int n,
                                     bool normalize_at_zero = false,
                                     double knot = 1.0);

// || s^{-1/n} f*(s) ||_{L^B(0, m)} with B as above.
double orlicz_lorentz_norm(const StepProfile& f, const OneDimYoung& a, int n,
                           bool normalize_at_zero = false, double knot = 1.0);

// Both sides of the two weighted Hardy inequalities for the profile psi
// (extended by zero beyond its support), with constant c = 1:
//   down:  ( int_0^inf ( t^{-r} int_0^t psi )^q dt/t )^{1/q}
//            vs  ( int_0^inf ( t^{1-r} psi(t) )^q dt/t )^{1/q}
//   up:    ( int_0^inf ( t^{ r} int_t^inf psi )^q dt/t )^{1/q}
//            vs  ( int_0^inf ( t^{1+r} psi(t) )^q dt/t )^{1/q}
// For q < 1 the bounds hold only on the monotone cone; hardy_check
// validates monotonicity in that case (ValidationError otherwise).
// Divergent sides are reported as +inf.
struct HardyReport {
  double lhs_down = 0, rhs_down = 0;  // averaging operator from below
  double lhs_up = 0, rhs_up = 0;      // averaging operator from above
  double ratio_down() const;          // lhs/rhs (inf-aware)
  double ratio_up() const;
};

HardyReport hardy_check(const StepProfile& psi, double r, double q);

}  // namespace anisym

#endif  // ANISYM_NORMS_HPP
