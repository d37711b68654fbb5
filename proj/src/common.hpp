#ifndef ANISYM_COMMON_HPP
#define ANISYM_COMMON_HPP

// Shared numeric utilities: the error taxonomy used across the library,
// unit-ball volumes, adaptive quadrature, exact integrals of power pieces,
// bracketed root finding on monotone functions, and a small FNV-1a hash
// used to build deterministic run identifiers.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace anisym {

// Raised when inputs violate a documented precondition (bad config values,
// parameters outside the admissible ranges of the estimates).  The CLI maps
// this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when a computation cannot meet its accuracy or finiteness contract
// (divergent integral, ill-posed radial problem, solver breakdown).  The CLI
// maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

// Volume of the unit ball in R^n:  pi^{n/2} / Gamma(1 + n/2).
double unit_ball_volume(int n);

// Adaptive Simpson quadrature of f on [a, b] (a < b, both finite).  The
// integrand must be finite on (a, b); endpoint values are nudged inward by
// a relative epsilon so mild endpoint singularities that have been
// substituted away do not poison the rule.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10,
                          int max_depth = 52);

// Exact integral of c * s^expo over [a, b], 0 <= a < b, handling expo == -1.
// Divergent combinations (expo <= -1 with a == 0) return +infinity.
double integrate_power(double c, double expo, double a, double b);

// Bisection for the unique root of the non-decreasing function f on
// [lo, hi] with f(lo) <= target <= f(hi).  Returns s with
// |f(s) - target| driven to rel_tol * max(1, |target|) scale or the
// interval shrunk below rel_tol in relative width.
double solve_increasing(const std::function<double(double)>& f, double target,
                        double lo, double hi, double rel_tol = 1e-12);

// Maximizer of a concave function on [lo, hi] via golden-section search.
double maximize_concave(const std::function<double(double)>& f, double lo,
                        double hi, double rel_tol = 1e-12);

// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

// |a - b| <= rel * max(|a|, |b|) + abs_floor.
bool nearly_equal(double a, double b, double rel, double abs_floor = 0.0);

}  // namespace anisym

#endif  // ANISYM_COMMON_HPP
