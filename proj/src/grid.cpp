#include "grid.hpp"

#include <cmath>

#include "common.hpp"

namespace anisym {

GridFunction::GridFunction(std::vector<int> n, std::vector<double> origin,
                           std::vector<double> h)
    : n_(std::move(n)), origin_(std::move(origin)), h_(std::move(h)) {
  if (n_.empty() || n_.size() != origin_.size() || n_.size() != h_.size()) {
    throw ValidationError("GridFunction: shape/origin/spacing mismatch");
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_.size(); ++i) {
    if (n_[i] < 1) throw ValidationError("GridFunction: empty axis");
    if (!(h_[i] > 0.0)) {
      throw ValidationError("GridFunction: spacing must be positive");
    }
    total *= static_cast<std::size_t>(n_[i]);
  }
  value_.assign(total, 0.0);
  mask_.assign(total, 1);
}

double GridFunction::cell_volume() const {
  double vol = 1.0;
  for (double hi : h_) vol *= hi;
  return vol;
}

double GridFunction::domain_measure() const {
  return static_cast<double>(masked_count()) * cell_volume();
}

std::size_t GridFunction::masked_count() const {
  std::size_t count = 0;
  for (std::uint8_t m : mask_) count += (m != 0);
  return count;
}

std::size_t GridFunction::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < n_.size(); ++i) {
    flat = flat * static_cast<std::size_t>(n_[i]) +
           static_cast<std::size_t>(idx[i]);
  }
  return flat;
}

std::vector<int> GridFunction::unflatten(std::size_t flat) const {
  std::vector<int> idx(n_.size(), 0);
  for (std::size_t i = n_.size(); i-- > 0;) {
    idx[i] = static_cast<int>(flat % static_cast<std::size_t>(n_[i]));
    flat /= static_cast<std::size_t>(n_[i]);
  }
  return idx;
}

std::vector<double> GridFunction::node_coord(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::vector<double> x(n_.size());
  for (std::size_t i = 0; i < n_.size(); ++i) {
    x[i] = origin_[i] + h_[i] * idx[i];
  }
  return x;
}

bool GridFunction::in_lattice(const std::vector<int>& idx) const {
  for (std::size_t i = 0; i < n_.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= n_[i]) return false;
  }
  return true;
}

double GridFunction::extended_value(const std::vector<int>& idx) const {
  if (!in_lattice(idx)) return 0.0;
  const std::size_t flat = flat_index(idx);
  return mask_[flat] ? value_[flat] : 0.0;
}

double GridFunction::max_abs() const {
  double best = 0.0;
  for (std::size_t k = 0; k < value_.size(); ++k) {
    if (mask_[k]) best = std::max(best, std::abs(value_[k]));
  }
  return best;
}

double GridFunction::edge_fraction(int axis, std::size_t flat) const {
  if (edge_frac_.empty()) return 1.0;
  return edge_frac_[static_cast<std::size_t>(axis)][flat];
}

void GridFunction::set_edge_fraction(int axis, std::size_t flat, double frac) {
  if (axis < 0 || axis >= dim() || flat >= value_.size() || !(frac > 0.0)) {
    throw ValidationError("GridFunction: invalid edge fraction");
  }
  if (edge_frac_.empty()) {
    edge_frac_.assign(n_.size(), std::vector<double>(value_.size(), 1.0));
  }
  edge_frac_[static_cast<std::size_t>(axis)][flat] = frac;
}

GridFunction make_disk_grid(double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0) || h >= radius) {
    throw ValidationError("make_disk_grid: needs 0 < h < radius");
  }
  const double cut = radius - 0.5 * h;
  // One ring beyond the masked set so every boundary edge has both
  // endpoints on the lattice.
  const int half = static_cast<int>(std::floor(cut / h + 1e-12)) + 1;
  const int n = 2 * half + 1;
  GridFunction grid({n, n}, {-half * h, -half * h}, {h, h});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.node_coord(k);
    grid.mask(k) = std::hypot(x[0], x[1]) <= cut + 1e-12 * radius ? 1 : 0;
  }

  // Boundary edges record where the segment through their masked endpoint
  // crosses the circle, in units of h, so the energy sees the true
  // in-domain edge length instead of the staircase cutoff.
  const std::size_t stride[2] = {static_cast<std::size_t>(n), 1};
  for (int axis = 0; axis < 2; ++axis) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto idx = grid.unflatten(k);
      if (idx[axis] + 1 >= n) continue;
      const std::size_t kb = k + stride[axis];
      const bool ma = grid.mask(k) != 0;
      const bool mb = grid.mask(kb) != 0;
      if (ma == mb) continue;
      const auto xm = grid.node_coord(ma ? k : kb);
      const double off2 = xm[1 - axis] * xm[1 - axis];
      const double along = std::sqrt(radius * radius - off2);
      const double t = ma ? along - xm[axis] : xm[axis] + along;
      grid.set_edge_fraction(axis, k, t / h);
    }
  }
  return grid;
}

GridFunction make_box_grid(const std::vector<double>& lo,
                           const std::vector<double>& hi, double h) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw ValidationError("make_box_grid: corner dimension mismatch");
  }
  if (!(h > 0.0)) throw ValidationError("make_box_grid: spacing must be > 0");
  std::vector<int> n(lo.size());
  std::vector<double> origin(lo.size()), spacing(lo.size(), h);
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double extent = hi[i] - lo[i];
    if (!(extent > 0.0)) {
      throw ValidationError("make_box_grid: needs lo < hi on every axis");
    }
    const double steps = extent / h;
    const int m = static_cast<int>(std::lround(steps));
    if (m < 2 || std::abs(steps - m) > 1e-9 * std::max(1.0, steps)) {
      throw ValidationError(
          "make_box_grid: extent must be an integer multiple (>= 2) of h");
    }
    n[i] = m - 1;  // interior vertex nodes only
    origin[i] = lo[i] + h;
  }
  return GridFunction(n, origin, spacing);
}

void fill_grid(GridFunction& grid,
               const std::function<double(const std::vector<double>&)>& fn) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.mask(k)) grid.value(k) = fn(grid.node_coord(k));
  }
}

}  // namespace anisym
