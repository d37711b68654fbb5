#ifndef ANISYM_REARRANGE_HPP
#define ANISYM_REARRANGE_HPP

// Rearrangements of masked grid functions.
//
// All operations treat a GridFunction as the simple function that takes the
// node value on each node-centred cell of volume prod(h) inside the mask.
// The decreasing rearrangement is therefore exactly the sorted-descending
// list of |values| with cell-volume steps, and equimeasurability holds
// exactly, not up to discretisation error.

#include "grid.hpp"
#include "profiles.hpp"

namespace anisym {

// mu(t) = measure of { |u| > t } within the mask.
double distribution_function(const GridFunction& u, double t);

// Decreasing rearrangement u*(s) as a right-continuous step profile on
// (0, measure]; equal adjacent values are merged.
StepProfile decreasing_rearrangement(const GridFunction& u);

// Maximal average  u**(s) = (1/s) int_0^s u*;  u**(0) = u*(0).
double double_star(const StepProfile& u_star, double s);

// Symmetric decreasing rearrangement as a radial profile on the ball of the
// same measure: node k of the profile sits at measure k * cell_volume and
// carries the k-th largest |value|.
RadialProfile symmetric_rearrangement(const GridFunction& u);

// Pseudo-rearrangement of h with respect to u: the cell values of h listed
// in the order of decreasing |u| (ties broken by ascending linear node
// index, or descending when reverse_ties is set), as a step profile.  The
// multiset of values of the result is exactly the multiset of cell values
// of h, so the mass identity int G = int h holds to rounding.
StepProfile pseudo_rearrangement(const GridFunction& h, const GridFunction& u,
                                 bool reverse_ties = false);

}  // namespace anisym

#endif  // ANISYM_REARRANGE_HPP
