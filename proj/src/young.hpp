#ifndef ANISYM_YOUNG_HPP
#define ANISYM_YOUNG_HPP

// Young functions and their symmetrization.
//
// A one-dimensional Young function A is an even, convex function with
// A(0) = 0, represented by samples on a logarithmic grid plus a power-log
// tail model  A(s) ~ coeff * s^q * (log s)^log_exp  beyond the last sample.
// Closed-form instances additionally carry an exact evaluation callback so
// identity-level tests are not limited by interpolation error.
//
// An N-dimensional Young function Phi (one of several parametric families)
// is reduced to a radial one by the conjugate/rearrangement sandwich
//
//     Phi_reduced(|xi|) = ( (Phi^*)_sym )^*(|xi|),
//
// i.e. take the Fenchel conjugate of Phi, replace it by its symmetric
// increasing rearrangement (computed from the measures of its sublevel
// sets), and take the one-dimensional conjugate of the resulting radial
// profile.  For the weighted power sum  Phi(xi) = sum_i lambda_i |xi_i|^{p_i}
// the reduction has the closed form  Lambda * s^{p_bar}  with p_bar the
// harmonic mean of the exponents and Lambda an explicit Gamma-function
// expression; the generic numeric pipeline is kept alongside as an
// independent path and is the only source of mid-range values for the
// non-separable family.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace anisym {

struct TailModel {
  double q = 2.0;        // power exponent
  double log_exp = 0.0;  // exponent of log s
  double coeff = 1.0;    // scale, continuous with the last sample
  double edge = 1e6;     // validity threshold (edge >> e, so log(edge) > 0)

  double eval(double s) const;
  // d/ds of the tail model.
  double derivative(double s) const;
};

class OneDimYoung {
public:
  OneDimYoung() = default;

  // Samples at strictly increasing abscissae starting at s_0 = 0 with
  // A(s_0) = 0; tail continuous at samples.back().  plateau_edge is the
  // largest s with A(s) = 0 (0 if A vanishes only at the origin).
  static OneDimYoung from_samples(std::vector<double> s, std::vector<double> v,
                                  TailModel tail, double plateau_edge = 0.0);

  // Sample fn on [s_min, s_max] (log grid, m points) and fit the tail
  // exponents from the last decade.  fn must be a Young function of s >= 0.
  static OneDimYoung from_function(const std::function<double(double)>& fn,
                                   double s_min = 1e-6, double s_max = 1e6,
                                   int m = 2048);

  // coeff * |s|^p  (exact callback installed).
  static OneDimYoung power(double coeff, double p);

  // coeff * |s|^p * log(shift + |s|)^alpha  (exact callback installed).
  // Requires p > 1, or p == 1 with alpha >= 0; shift >= e.
  static OneDimYoung power_log(double coeff, double p, double alpha,
                               double shift);

  double eval(double s) const;        // even in s
  double derivative(double s) const;  // one-sided at kinks
  // Inverse on [0, +inf): the unique s >= plateau_edge with A(s) = y.
  double inverse(double y) const;

  double plateau_edge() const { return plateau_edge_; }
  const TailModel& tail() const { return tail_; }
  const std::vector<double>& sample_points() const { return s_; }
  const std::vector<double>& sample_values() const { return v_; }
  bool has_exact() const { return static_cast<bool>(exact_); }
  // Largest sampled abscissa (tail applies beyond).
  double sample_edge() const { return s_.empty() ? 0.0 : s_.back(); }

  // Attach or drop the exact callback (used by identity-level paths).
  void set_exact(std::function<double(double)> fn) { exact_ = std::move(fn); }

private:
  std::vector<double> s_;
  std::vector<double> v_;
  TailModel tail_;
  double plateau_edge_ = 0.0;
  std::function<double(double)> exact_;

  double interp(double s) const;
};

// One-dimensional Fenchel conjugate  A*(y) = sup_{s>=0} (s y - A(s)).
// The input must be superlinear (tail q > 1, or q == 1 with log_exp > 0);
// otherwise the conjugate jumps to +infinity at finite slope and is not a
// Young function (ValidationError).
OneDimYoung conjugate_1d(const OneDimYoung& a);

// Pointwise conjugate value (sup over samples refined by golden section,
// analytic in the tail region).
double conjugate_value_1d(const OneDimYoung& a, double y);

// ---------------------------------------------------------------------------
// N-dimensional families.

struct PowerSumSpec {
  std::vector<double> p;       // exponents, p_i >= 1
  std::vector<double> lambda;  // weights, lambda_i > 0
};

struct LogPerturbedSumSpec {
  std::vector<double> p;      // p_i > 1, or p_i == 1 with alpha_i >= 0
  std::vector<double> alpha;  // log exponents
  double shift;               // >= e, large enough for convexity
};

// N = 2 only:  |xi_1 - xi_2|^alpha + |xi_1|^beta log(shift + |xi_1|)^delta.
struct TwoDimCoupledSpec {
  double alpha = 2.0;  // >= 1
  double beta = 2.0;   // >= 1
  double delta = 0.0;  // any real if beta > 1, >= 0 if beta == 1
  double shift = 2.718281828459045;
};

struct RadialSpec {
  OneDimYoung profile;  // Phi(xi) = profile(|xi|)
};

struct TabulatedSpec {
  std::vector<OneDimYoung> addends;  // Phi(xi) = sum_i addends[i](xi_i)
};

class YoungSpec {
public:
  using Family = std::variant<PowerSumSpec, LogPerturbedSumSpec,
                              TwoDimCoupledSpec, RadialSpec, TabulatedSpec>;

  YoungSpec(int dim, Family family);  // validates; throws ValidationError

  static YoungSpec power_sum(std::vector<double> p, std::vector<double> lambda);
  static YoungSpec log_perturbed_sum(std::vector<double> p,
                                     std::vector<double> alpha, double shift);
  static YoungSpec two_dim_coupled(double alpha, double beta, double delta,
                                   double shift);
  static YoungSpec radial(int dim, OneDimYoung profile);
  static YoungSpec tabulated(std::vector<OneDimYoung> addends);

  int dim() const { return dim_; }
  const Family& family() const { return family_; }
  bool separable() const;

  // Phi(xi); even in each coordinate for separable variants.
  double eval(const std::vector<double>& xi) const;

  // Fenchel conjugate  Phi*(eta) = sup_xi (xi . eta - Phi(xi)).
  // Separable variants conjugate coordinate-wise; the coupled family is
  // maximised numerically (N == 2).
  double conjugate_eval(const std::vector<double>& eta) const;

private:
  int dim_;
  Family family_;
};

// ---------------------------------------------------------------------------
// Reduction to a radial Young function.

struct KlimovConstants {
  double p_bar;    // harmonic mean of the exponents
  double lambda;   // multiplicative constant of the reduced power function
};

// Closed form for the weighted power sum.  Requires p_bar > 1.
KlimovConstants power_sum_klimov(const std::vector<double>& p,
                                 const std::vector<double>& lambda, int n);

// Reduced radial Young function of the N-dimensional spec.  PowerSum uses
// the closed form; other families run the numeric pipeline.  The numeric
// pipeline can be forced for any family (used for cross-validation).
OneDimYoung klimov_symmetrize(const YoungSpec& spec);
OneDimYoung klimov_symmetrize_numeric(const YoungSpec& spec);

// ---------------------------------------------------------------------------
// Derived scalar maps.

// Psi(s) = phi(s)/s for s > plateau_edge (extended by 0 below); strictly
// increasing under the standard admissibility requirement phi(s)/s -> 0 as
// s -> 0+, which is validated.
class PsiMap {
public:
  explicit PsiMap(const OneDimYoung& phi);

  double eval(double s) const;
  // Least upper bound of Psi (may be +infinity).
  double range_sup() const { return sup_; }
  // Inverse; throws NumericalError when r >= range_sup() (radial problem
  // not solvable for such data).
  double inverse(double r) const;

private:
  const OneDimYoung* phi_;
  double sup_;
  std::optional<double> power_exponent_;  // set for exact power functions
  std::optional<double> power_coeff_;
};

PsiMap psi(const OneDimYoung& phi);

// Increasing map r >= 0 -> (phi*)^{-1}(r) together with phi* itself.
class ConjugateInverse {
public:
  explicit ConjugateInverse(const OneDimYoung& phi);
  double eval(double r) const;              // (phi*)^{-1}(r)
  const OneDimYoung& conjugate() const { return conj_; }

private:
  OneDimYoung conj_;
  std::optional<double> power_exponent_;  // exact path for power functions
  std::optional<double> power_coeff_;
};

ConjugateInverse conjugate_inverse(const OneDimYoung& phi);

// ---------------------------------------------------------------------------
// Growth classification for the Sobolev-type embedding.

struct SobolevRegime {
  // true  -> int^inf (s/phi(s))^{1/(N-1)} ds converges: every function with
  //          finite reduced gradient energy is essentially bounded.
  bool bounded_regime = false;
  // Whether phi had to be replaced near zero by its secant to make
  // int_0 (s/phi(s))^{1/(N-1)} ds finite.
  bool renormalized_at_zero = false;
  // Set in the unbounded regime: H(r) = (int_0^r (s/phi)^{1/(N-1)})^{1/N'}
  // and the associated limiting Young function phi_N = phi o H^{-1}.
  std::function<double(double)> H;
  std::function<double(double)> H_inverse;
  std::optional<OneDimYoung> phi_N;
};

// Classify growth; in the unbounded regime construct H and phi_N.  If the
// integral condition at zero fails and normalize_at_zero is false, throws
// ValidationError("...renormalization near zero required...").
SobolevRegime sobolev_classifier(const OneDimYoung& phi, int n,
                                 bool normalize_at_zero = false,
                                 double knot = 1.0);

// Replace phi on [0, knot] by its secant through the origin (keeps
// convexity and the values beyond the knot).
OneDimYoung normalize_near_zero(const OneDimYoung& phi, double knot);

}  // namespace anisym

#endif  // ANISYM_YOUNG_HPP
