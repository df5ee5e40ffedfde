#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "supermarket/sequences.hpp"

namespace supermarket {

/// Thrown when an integrator detects divergence or fails to converge.
class SolverFault : public std::runtime_error {
 public:
  explicit SolverFault(const std::string& what) : std::runtime_error(what) {}
};

/// Truncation rule supplying the phantom level T_{L+1} for a state of
/// length L+1 (levels 0..L).
///   Zero:      T_{L+1} = 0
///   Geometric: T_{L+1} = (d+1) T_L - d T_{L-1}  (freezes the top level,
///              and is exact on the fixed-point family)
///   Frozen:    T_{L+1} = T_L  (no flux through the top boundary)
enum class Closure { Zero, Geometric, Frozen };

double phantom_level(std::span<const double> T, int d, Closure closure);

/// Drift of the limiting system with the closure applied at the top:
///   r_0 = 0,
///   r_i = -d (T_i - T_{i-1}) + (T_{i+1} - T_i),  1 <= i <= L.
/// Terms are grouped as (d T_{i-1} - (d+1) T_i) + T_{i+1}; combined with
/// fixed_point's recurrence this cancels exactly in floating point, so the
/// residual at the fixed point is zero at any magnitude.
RealSeq rhs_limit(std::span<const double> T, int d, Closure closure);

struct IntegrateOptions {
  Closure closure = Closure::Geometric;
  // Abort with SolverFault when ||T||_{divergence_rho} exceeds this.
  double divergence_limit = 1e6;
  double divergence_rho = 2.0;
};

/// Classical fixed-step RK4 from t = 0 to horizon, recording every step.
/// init is levels 0..L with init[0] == 0; the grid is k*dt.
GridPath integrate_limit(const RealSeq& init, int d, double horizon, double dt,
                         const IntegrateOptions& opts = {});

}  // namespace supermarket
