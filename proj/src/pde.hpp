#ifndef ANISYM_PDE_HPP
#define ANISYM_PDE_HPP

// Finite-difference energy minimisation for the anisotropic model problem
//
//   - sum_i d/dx_i ( lambda_i |u_{x_i}|^{p_i - 2} u_{x_i} )  =  f - div g,
//   u = 0 on the domain boundary,
//
// discretised as the minimisation over masked nodes (zero extension) of
//
//   J(u) = sum_edges  h^N (lambda_i / p_i) |D_i u|^{p_i}
//          - sum_cells h^N f u
//          - sum_cells h^N g_i D_i u,
//
// where D_i is the forward difference along axis i, the edge sum runs over
// every lattice edge with at least one masked endpoint (the discrete H^1_0
// gradient), and the divergence-datum sum pairs the node value of g_i with
// the forward difference based at the same node (g_i is read as 0 outside
// the mask, so only edges based at masked nodes contribute).  For exponents below 2 the non-smooth |D|^{p} terms are
// regularised as (D^2 + eps^2)^{p/2} - eps^p and eps is driven to eps_min
// by a continuation loop.  The minimiser is found by Polak-Ribiere
// conjugate gradients with a derivative-fitted initial step and Armijo
// backtracking; for quadratic problems the fitted step is the exact line
// minimiser, so the method reduces to nonlinear CG with exact line search.

#include <vector>

#include "grid.hpp"

namespace anisym {

struct DiscreteProblem {
  GridFunction domain;          // geometry + mask (values unused)
  std::vector<double> p;        // exponents per axis, p_i > 1
  std::vector<double> lambda;   // weights per axis, lambda_i > 0
  GridFunction f;               // source term on the same lattice
  std::vector<GridFunction> g;  // divergence datum per axis; empty == 0

  double p_bar() const;  // harmonic mean of the exponents
  void validate() const; // throws ValidationError
};

struct SolveOptions {
  double tol = 1e-8;        // relative gradient-norm stopping threshold
  int max_iter = 60000;     // NCG iteration cap per continuation stage
  double eps_start = 1e-2;  // first regularisation level (p_i < 2 only)
  double eps_min = 1e-8;    // final regularisation level
  bool record_trace = true;
  int trace_stride = 10;    // record every k-th iteration
};

struct TraceRow {
  int iteration;      // global iteration counter
  double eps;         // regularisation level in force
  double energy;
  double grad_norm;   // Euclidean norm of the energy gradient
  double step;        // accepted line-search step
};

struct SolveResult {
  GridFunction u;
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double grad_norm = 0.0;      // final gradient norm
  double relative_grad = 0.0;  // final norm / initial norm
  std::vector<TraceRow> trace;
};

// Regularised energy J_eps(u); eps = 0 gives the exact energy.
double energy(const DiscreteProblem& prob, const GridFunction& u,
              double eps = 0.0);

// Gradient of J_eps into grad (resized; entries for unmasked nodes are 0).
void energy_gradient(const DiscreteProblem& prob, const GridFunction& u,
                     double eps, std::vector<double>& grad);

SolveResult solve(const DiscreteProblem& prob, const SolveOptions& opts = {});

// Max-norm of the per-node Euler-Lagrange residual
//   ( -div_h a(grad_h u) - f + div_h g ) at the given regularisation level,
// i.e. max |dJ_eps/du_node| / h^N over masked nodes.
double residual(const DiscreteProblem& prob, const GridFunction& u,
                double eps = 1e-8);

// Which finite-difference edges enter a gradient functional.
enum class EdgeSet {
  kAll,       // every edge with a masked endpoint (the energy's edge set)
  kInterior,  // only edges with both endpoints masked
};

// Per-axis gradient norms ( sum_edges h^N |D_i u|^{q} )^{1/q}, or the edge
// max for q = inf.
std::vector<double> gradient_norms(const DiscreteProblem& prob,
                                   const GridFunction& u, double q,
                                   EdgeSet edges = EdgeSet::kAll);

// sum_edges h^N  Phi(D u) for the problem's weighted power sum, i.e.
// sum_i lambda_i |D_i u|^{p_i} over the chosen edge set.  This is the
// gradient integrand of the comparison estimates (the unscaled sum, not
// the 1/p_i-weighted energy term).
double gradient_integral(const DiscreteProblem& prob, const GridFunction& u,
                         EdgeSet edges = EdgeSet::kAll);

}  // namespace anisym

#endif  // ANISYM_PDE_HPP
