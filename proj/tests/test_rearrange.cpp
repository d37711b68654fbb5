#include "rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "grid.hpp"

using namespace anisym;

namespace {

GridFunction small_grid(const std::vector<double>& values) {
  // 1 x K lattice with unit spacing, all nodes masked.
  GridFunction g({1, static_cast<int>(values.size())}, {0.0, 0.0}, {1.0, 1.0});
  for (std::size_t k = 0; k < values.size(); ++k) {
    g.value(k) = values[k];
    g.mask(k) = 1;
  }
  return g;
}

GridFunction random_masked_grid(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size_dist(1, 6);
  std::uniform_real_distribution<double> value_dist(-2.0, 2.0);
  std::bernoulli_distribution mask_dist(0.7);
  GridFunction g({size_dist(rng), size_dist(rng)}, {0.0, 0.0}, {0.5, 0.5});
  bool any = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.value(k) = value_dist(rng);
    g.mask(k) = mask_dist(rng) ? 1 : 0;
    any = any || g.mask(k);
  }
  if (!any) g.mask(0) = 1;
  return g;
}

std::vector<double> sorted_masked_abs(const GridFunction& g) {
  std::vector<double> vals;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.mask(k)) vals.push_back(std::abs(g.value(k)));
  }
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

}  // namespace

TEST_CASE("distribution function of a small grid") {
  const auto u = small_grid({3, 1, 2, 2});
  CHECK(distribution_function(u, 1.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(distribution_function(u, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(distribution_function(u, 3.0) == 0.0);
}

TEST_CASE("decreasing rearrangement of a small grid") {
  const auto u = small_grid({3, 1, 2, 2});
  const auto star = decreasing_rearrangement(u);
  CHECK(star.measure() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(star.eval(0.0) == 3.0);
  CHECK(star.eval(0.5) == 3.0);
  CHECK(star.eval(1.0) == 2.0);  // right-continuous at the jump
  CHECK(star.eval(2.5) == 2.0);
  CHECK(star.eval(3.5) == 1.0);
  CHECK(star.integral() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(star.non_increasing());
}

TEST_CASE("maximal average of a step profile") {
  const StepProfile star({0, 1, 2, 3, 4}, {3, 2, 2, 1});
  CHECK(double_star(star, 2.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(double_star(star, 0.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(double_star(star, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("rearrangement equals the sorting oracle and is equimeasurable") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = random_masked_grid(rng);
    const auto star = decreasing_rearrangement(u);
    const auto sorted = sorted_masked_abs(u);
    const double vol = u.cell_volume();

    // profile values at cell midpoints match the sorted list exactly
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      CHECK(star.eval((static_cast<double>(k) + 0.5) * vol) == sorted[k]);
    }
    CHECK(star.measure() ==
          doctest::Approx(u.domain_measure()).epsilon(1e-13));

    // equimeasurability at 100 levels
    const double top = star.max_value();
    for (int j = 0; j < 100; ++j) {
      const double t = top * (static_cast<double>(j) / 99.0) * 1.001;
      double level_measure = 0.0;
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] > t) level_measure += vol;
      }
      CHECK(distribution_function(u, t) ==
            doctest::Approx(level_measure).epsilon(1e-12));
    }
  }
}

TEST_CASE("symmetric rearrangement of a radial function") {
  const auto grid = make_disk_grid(1.0, 1.0 / 8.0);
  GridFunction u = grid;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!u.mask(k)) continue;
    const auto x = u.node_coord(k);
    u.value(k) = 1.0 - (x[0] * x[0] + x[1] * x[1]);
  }
  const auto rad = symmetric_rearrangement(u);
  CHECK(rad.measure() == doctest::Approx(u.domain_measure()).epsilon(1e-12));

  // one-cell oscillation bound: the radial profile of an already radial
  // decreasing function deviates at most by the largest sorted gap
  const auto sorted = sorted_masked_abs(u);
  double max_gap = 0.0;
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    max_gap = std::max(max_gap, sorted[k] - sorted[k + 1]);
  }
  double worst = 0.0;
  for (double rho = 0.05; rho < 0.9; rho += 0.05) {
    const double expect = 1.0 - rho * rho;
    worst = std::max(worst, std::abs(rad.eval_radius(rho) - expect));
  }
  // measure quantisation shifts radii by O(h); allow gap + curvature slack
  CHECK(worst <= max_gap + 0.1);
}

TEST_CASE("pseudo-rearrangement ordering and tie handling") {
  const auto h = small_grid({10, 20, 30});
  const auto u = small_grid({3, 2, 1});
  const auto g = pseudo_rearrangement(h, u);
  CHECK(g.measure() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g.eval(0.5) == 10.0);
  CHECK(g.eval(1.5) == 20.0);
  CHECK(g.eval(2.5) == 30.0);
  CHECK(g.integral() == doctest::Approx(60.0).epsilon(1e-14));

  const auto h2 = small_grid({5, 7});
  const auto ties = small_grid({1, 1});
  const auto fwd = pseudo_rearrangement(h2, ties, false);
  const auto rev = pseudo_rearrangement(h2, ties, true);
  CHECK(fwd.eval(0.5) == 5.0);
  CHECK(fwd.eval(1.5) == 7.0);
  CHECK(rev.eval(0.5) == 7.0);
  CHECK(rev.eval(1.5) == 5.0);
  CHECK(fwd.integral() == doctest::Approx(rev.integral()).epsilon(1e-14));
}

TEST_CASE("pseudo-rearrangement mass identity on random pairs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_masked_grid(rng);
    GridFunction h = u;
    for (std::size_t k = 0; k < h.size(); ++k) {
      h.value(k) = std::abs(h.value(k)) + 0.25;
    }
    const auto g = pseudo_rearrangement(h, u);
    double mass = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h.mask(k)) mass += h.value(k) * h.cell_volume();
    }
    CHECK(g.integral() == doctest::Approx(mass).epsilon(1e-12));
    CHECK(g.measure() == doctest::Approx(u.domain_measure()).epsilon(1e-12));
  }
}

TEST_CASE("pseudo-rearrangement follows the level ordering of u") {
  // u strictly radial decreasing: the profile of h starts at the centre cell
  const auto grid = make_disk_grid(1.0, 0.25);
  GridFunction u = grid;
  GridFunction h = grid;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!u.mask(k)) continue;
    const auto x = u.node_coord(k);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    u.value(k) = 2.0 - r2;
    h.value(k) = 5.0 + r2;  // increasing along decreasing u
  }
  const auto g = pseudo_rearrangement(h, u);
  CHECK(g.eval(g.measure() * 1e-3) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(g.non_increasing() == false);
  // the emitted sequence is non-decreasing since h increases as u decreases
  const auto& vals = g.values();
  for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
    CHECK(vals[k] <= vals[k + 1] + 1e-15);
  }
}
