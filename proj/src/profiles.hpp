#ifndef ANISYM_PROFILES_HPP
#define ANISYM_PROFILES_HPP

// One-dimensional reductions of functions on a domain of finite measure:
//
//  * StepProfile   — a piecewise-constant function of the measure coordinate
//                    s in [0, measure], right-continuous at its breakpoints.
//                    Decreasing rearrangements, data profiles f*(s), and
//                    pseudo-rearrangements are all StepProfiles.
//  * RadialProfile — a radially symmetric function on the ball of the same
//                    measure as the domain, stored as piecewise-linear values
//                    against the measure coordinate s = omega_N * |x|^N.
//
// Both carry exact prefix integrals so norm and barrier computations can
// integrate pieces in closed form instead of by generic quadrature.

#include <vector>

namespace anisym {

class StepProfile {
public:
  StepProfile() = default;
  // edges: 0 = e_0 < e_1 < ... < e_K;  values: value on (e_k, e_{k+1}].
  StepProfile(std::vector<double> edges, std::vector<double> values);

  static StepProfile constant(double value, double measure);

  double measure() const { return edges_.empty() ? 0.0 : edges_.back(); }
  std::size_t pieces() const { return values_.size(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& values() const { return values_; }

  // Right-continuous evaluation: s in [e_k, e_{k+1}) -> values_[k];
  // eval(measure()) returns the last value.
  double eval(double s) const;

  // Exact prefix integral  int_0^s  of the step function.
  double prefix_integral(double s) const;
  double integral() const;

  // Running average  (1/s) int_0^s;  at s == 0 returns the first value.
  double running_average(double s) const;

  double max_value() const;
  double min_value() const;
  bool non_increasing(double tol = 0.0) const;
  bool non_negative() const;

  // Same values with edges scaled so that measure() == new_measure.
  StepProfile stretched(double new_measure) const;

  // Merge adjacent pieces with equal values.
  StepProfile compressed() const;

  // Profile of s |-> scale * this(s) (values scaled).
  StepProfile scaled(double scale) const;

private:
  std::vector<double> edges_;   // size K+1, edges_[0] == 0
  std::vector<double> values_;  // size K
  std::vector<double> prefix_;  // size K+1, prefix_[k] = int_0^{e_k}
};

class RadialProfile {
public:
  RadialProfile() = default;
  // s: measure nodes 0 = s_0 < ... < s_M;  v: values at the nodes;
  // dim: the ambient dimension N used to convert measure to radius.
  RadialProfile(int dim, std::vector<double> s, std::vector<double> v);

  int dim() const { return dim_; }
  double measure() const { return s_.empty() ? 0.0 : s_.back(); }
  const std::vector<double>& nodes() const { return s_; }
  const std::vector<double>& values() const { return v_; }

  // Piecewise-linear interpolation in the measure coordinate.
  double eval_measure(double s) const;
  // Value at |x| = rho, i.e. eval_measure(omega_N rho^N).
  double eval_radius(double rho) const;
  // rho(s) = (s / omega_N)^{1/N}.
  double radius_of(double s) const;
  double outer_radius() const { return radius_of(measure()); }
  double max_value() const;

private:
  int dim_ = 2;
  std::vector<double> s_;
  std::vector<double> v_;
};

}  // namespace anisym

#endif  // ANISYM_PROFILES_HPP
