#ifndef ANISYM_BARRIER_HPP
#define ANISYM_BARRIER_HPP

// The radial barrier solution.
//
// Given the reduced radial Young function phi (with Psi(s) = phi(s)/s and
// conjugate phi*), data profiles f* (decreasing rearrangement of f) and G
// (pseudo-rearrangement profile of the conjugate composed with the
// divergence datum), and constants C1, C2 absorbed into the data, the
// radial problem on the ball of measure |Omega| is solved in closed
// quadrature form:
//
//   F(r) = Psi^{-1}( C1 * [ r^{1/N} f**(r) / (N omega_N^{1/N})
//                           + (phi*)^{-1}( G(r) ) ] )
//   v(s) = int_s^{|Omega|} F(r) / (N omega_N^{1/N} r^{1/N'}) dr
//        = int_{rho(s)}^{R} F(omega_N rho^N) d rho            (radius form)
//
// so |grad v|(x) = F(omega_N |x|^N) and the gradient energy is
// int_0^{|Omega|} phi(F(r)) dr.  The radius substitution removes the
// endpoint singularity of the measure form, so per-piece Gauss quadrature
// converges at the advertised tolerances.

#include <string>

#include "profiles.hpp"
#include "young.hpp"

namespace anisym {

struct BarrierSpec {
  OneDimYoung phi;      // reduced radial Young function
  int dim = 2;          // N >= 2
  double c1 = 1.0;      // constant multiplying the whole datum
  double c2 = 1.0;      // constant already composed into G's datum
  StepProfile f_star;   // decreasing rearrangement of f on (0, |Omega|]
  StepProfile g_profile;  // profile G on (0, |Omega|] (zero profile allowed)

  double measure() const;  // |Omega| (validated: profiles agree)
};

// F sampled as a step profile on a refined grid (union of data breakpoints
// and a log-spaced refinement, `refine` subdivisions per piece).
StepProfile barrier_flux_profile(const BarrierSpec& spec, int refine = 16);

// Pointwise F(r).
double barrier_flux(const BarrierSpec& spec, double r);

// The radial solution v as a profile over the measure coordinate.
// nodes: number of radial quadrature nodes.
RadialProfile barrier_solution(const BarrierSpec& spec, int nodes = 2048);

// Well-posedness of the radial problem and admissibility of the data.
struct BarrierWellPosed {
  bool psi_range_unbounded = false;   // Psi(s) -> +inf as s -> inf
  bool pointwise_range_ok = false;    // datum below sup Psi everywhere
  double worst_range_margin = 0.0;    // min over r of sup Psi - datum(r)
  bool gradient_energy_finite = false;
  double gradient_energy = 0.0;       // int_0^{|Omega|} phi(F(r)) dr
  bool data_admissible = false;       // Luxemburg norm of s^{1/N} f**(s)
                                      // w.r.t. phi* finite; int G finite
  std::string notes;

  bool ok() const {
    return (psi_range_unbounded || pointwise_range_ok) &&
           gradient_energy_finite && data_admissible;
  }
};

BarrierWellPosed barrier_wellposed(const BarrierSpec& spec);

// int_0^{|Omega|} phi(F(r)) dr.
double barrier_gradient_energy(const BarrierSpec& spec);

}  // namespace anisym

#endif  // ANISYM_BARRIER_HPP
