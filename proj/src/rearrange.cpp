#include "rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "common.hpp"

namespace anisym {

namespace {

std::vector<std::size_t> masked_indices(const GridFunction& g) {
  std::vector<std::size_t> idx;
  idx.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.mask(k)) idx.push_back(k);
  }
  return idx;
}

std::vector<double> cell_edges(std::size_t count, double vol) {
  std::vector<double> edges(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    edges[k] = double(k) * vol;
  }
  return edges;
}

}  // namespace

double distribution_function(const GridFunction& u, double t) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u.mask(k) && std::abs(u.value(k)) > t) ++count;
  }
  return double(count) * u.cell_volume();
}

StepProfile decreasing_rearrangement(const GridFunction& u) {
  std::vector<double> vals;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u.mask(k)) vals.push_back(std::abs(u.value(k)));
  }
  if (vals.empty()) return StepProfile();
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  std::vector<double> edges = cell_edges(vals.size(), u.cell_volume());
  StepProfile raw(std::move(edges), std::move(vals));
  return raw.compressed();
}

double double_star(const StepProfile& u_star, double s) {
  return u_star.running_average(s);
}

RadialProfile symmetric_rearrangement(const GridFunction& u) {
  std::vector<double> vals;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u.mask(k)) vals.push_back(std::abs(u.value(k)));
  }
  if (vals.empty()) return RadialProfile();
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  const double vol = u.cell_volume();
  std::vector<double> nodes(vals.size() + 1);
  for (std::size_t k = 0; k <= vals.size(); ++k) {
    nodes[k] = double(k) * vol;
  }
  // Extend the innermost cell values to the full cell span: node k carries
  // the k-th largest value, the closing node repeats the smallest one.
  std::vector<double> v(vals.begin(), vals.end());
  v.push_back(vals.back());
  return RadialProfile(int(u.shape().size()), std::move(nodes), std::move(v));
}

StepProfile pseudo_rearrangement(const GridFunction& h, const GridFunction& u,
                                 bool reverse_ties) {
  if (h.shape() != u.shape()) {
    throw ValidationError("pseudo-rearrangement needs matching grids");
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h.mask(k) != u.mask(k)) {
      throw ValidationError("pseudo-rearrangement needs matching masks");
    }
  }
  std::vector<std::size_t> order = masked_indices(u);
  if (order.empty()) return StepProfile();
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) {
              const double ua = std::abs(u.value(a));
              const double ub = std::abs(u.value(b));
              if (ua != ub) return ua > ub;
              return reverse_ties ? a > b : a < b;
            });
  std::vector<double> vals(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    vals[k] = h.value(order[k]);
  }
  std::vector<double> edges = cell_edges(vals.size(), h.cell_volume());
  return StepProfile(std::move(edges), std::move(vals));
}

}  // namespace anisym
