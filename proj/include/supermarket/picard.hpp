#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "supermarket/eta.hpp"
#include "supermarket/limit_ode.hpp"
#include "supermarket/sequences.hpp"

namespace supermarket {

/// Inputs for the stopped integral system
///   x_i(t) = b_i + y_i(t)
///            - lambda d Int_0^t (x_i - x_{i-1} - g(x_i) + g(x_{i-1})) ds
///            + Int_0^t (x_{i+1} - x_i) ds,          1 <= i <= L,  x_0 == 0,
/// truncated at level L with a closure phantom for x_{L+1}.
struct PicardInput {
  RealSeq b;    // initial offsets, levels 0..L, b[0] == 0
  GridPath y;   // perturbation paths, piecewise constant between its grid
                // nodes; empty means y == 0; level 0 is ignored
  double lambda = 1.0;
  Eta eta = Eta::infinite();
  int d = 2;

  // Stopped-region geometry (finite eta only): the solution is frozen at the
  // first grid time where some level i <= i_star reaches |x_i| >= eta^alpha
  // or some level above i_star exceeds eta + 1.
  double alpha = 0.4;
  double rho = 2.0;
  double istar_scale = 0.5;
};

struct PicardOptions {
  double tol = 1e-10;   // fixed-point tolerance, segment path norm
  int max_iters = 60;   // per segment
  Closure closure = Closure::Geometric;

  // Per-segment contraction modulus: segments are at most gamma_target / k
  // long, where k = lambda d (1 + 1/rho)(1 + 4^d) + 1 + rho is the operator
  // bound entering the contraction estimate. 1/2 keeps the classical
  // half-threshold segment length.
  double gamma_target = 0.5;

  // Extra cap on the internal quadrature step (trapezoid error control);
  // the contraction bound above always applies as well.
  double max_internal_dt = std::numeric_limits<double>::infinity();
};

struct PicardResult {
  GridPath path;                  // stopped solution on the output grid
  std::optional<double> t_star;   // empty when the solution never left B
  std::vector<double> contraction_ratios;  // successive-difference ratios
  int segments = 0;
  int total_iterations = 0;
};

/// Picard iteration on successive short segments. Each segment is short
/// enough that the integral map contracts with modulus <= gamma_target in
/// the rho path norm; the converged tail of one segment seeds the next.
/// Throws SolverFault when a segment fails to converge in max_iters.
PicardResult picard_solve(const PicardInput& in, double horizon,
                          double grid_dt, const PicardOptions& opts = {});

/// A-priori growth bound on the solution:
///   ||x||_{rho,t} <= (||b||_rho + ||y||_{rho,t}) e^{C t},
/// C = lambda d (1 + 4^d)(1 + 1/rho) + 1 + rho.
struct GrowthBoundReport {
  bool holds = true;
  double rate = 0.0;         // the constant C above
  double worst_ratio = 0.0;  // max over grid of lhs/rhs
  double worst_t = 0.0;
};

GrowthBoundReport growth_bound_check(const PicardResult& result,
                                     const PicardInput& in);

}  // namespace supermarket
