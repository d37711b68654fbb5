#ifndef ANISYM_GRID_HPP
#define ANISYM_GRID_HPP

// Node-centred lattice functions with a domain mask.
//
// A GridFunction stores values at the nodes of a uniform lattice together
// with a mask selecting the nodes that belong to the computational domain.
// Values are extended by zero outside the mask, which is exactly the
// homogeneous Dirichlet condition used by the energy minimisation: every
// lattice edge leaving the masked set sees the boundary value 0 at its far
// end.  Each node owns a cell of volume prod(h), so sums over masked nodes
// times the cell volume are the discrete integrals used throughout.
//
// Two domain builders are provided:
//  * make_box_grid  — the interior nodes of a vertex lattice on a box; the
//    omitted boundary nodes lie exactly on the boundary, so the zero
//    extension implements the boundary condition without geometric bias.
//  * make_disk_grid — nodes of an origin-centred lattice with
//    |x| <= radius - h/2; the half-cell margin balances the radius at which
//    the zero extension takes effect (first node outside the mask) around
//    the true circle.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace anisym {

class GridFunction {
public:
  GridFunction() = default;
  GridFunction(std::vector<int> n, std::vector<double> origin,
               std::vector<double> h);

  int dim() const { return static_cast<int>(n_.size()); }
  const std::vector<int>& shape() const { return n_; }
  const std::vector<double>& spacing() const { return h_; }
  const std::vector<double>& origin() const { return origin_; }

  std::size_t size() const { return value_.size(); }
  double cell_volume() const;
  // Measure of the masked domain: (#masked nodes) * cell_volume().
  double domain_measure() const;
  std::size_t masked_count() const;

  // Flattened indexing; the last axis varies fastest.
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::vector<double> node_coord(std::size_t flat) const;

  double& value(std::size_t flat) { return value_[flat]; }
  double value(std::size_t flat) const { return value_[flat]; }
  std::uint8_t& mask(std::size_t flat) { return mask_[flat]; }
  std::uint8_t mask(std::size_t flat) const { return mask_[flat]; }
  std::vector<double>& values() { return value_; }
  const std::vector<double>& values() const { return value_; }

  // Zero-extended read: 0 outside the lattice or outside the mask.
  double extended_value(const std::vector<int>& idx) const;
  bool in_lattice(const std::vector<int>& idx) const;

  // Max |value| over masked nodes.
  double max_abs() const;

  // In-domain length, in units of h_i, of the axis-i lattice segment
  // [node, node + h_i e_i] measured from its masked endpoint to the domain
  // boundary.  Defaults to 1 (the far endpoint carries the boundary value),
  // which is exact for boxes; curved domains store the true crossing so the
  // energy can measure boundary edges with the correct length.  Only
  // segments with exactly one masked endpoint consult this table.
  double edge_fraction(int axis, std::size_t flat) const;
  void set_edge_fraction(int axis, std::size_t flat, double frac);

private:
  std::vector<int> n_;
  std::vector<double> origin_;
  std::vector<double> h_;
  std::vector<double> value_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::vector<double>> edge_frac_;  // empty means all 1
};

// Disk of the given radius centred at the origin; mask |x| <= radius - h/2,
// with the circle crossings of the boundary edges stored as edge fractions.
GridFunction make_disk_grid(double radius, double h);

// Interior nodes of a vertex lattice on the box [lo_1,hi_1]x...x[lo_d,hi_d];
// each extent must be an integer multiple of h (within rounding slack).
GridFunction make_box_grid(const std::vector<double>& lo,
                           const std::vector<double>& hi, double h);

// Evaluate fn(x) at every masked node.
void fill_grid(GridFunction& grid,
               const std::function<double(const std::vector<double>&)>& fn);

}  // namespace anisym

#endif  // ANISYM_GRID_HPP
