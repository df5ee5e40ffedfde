#pragma once

#include <cstddef>

#include "supermarket/sequences.hpp"

namespace supermarket {

/// Fixed point of the limiting system: pi_0 = 0, pi_1 given, and
/// pi_{i+1} = (d+1) pi_i - d pi_{i-1}, which closes to
/// pi_i = pi_1 (d^i - 1)/(d - 1). Returns levels 0..L.
///
/// Built with the recurrence so rhs_limit's grouping cancels exactly in
/// floating point; do not replace with the closed form.
RealSeq fixed_point(int d, double pi1, std::size_t L);

/// Lyapunov weight function Phi(T) = sum_{i>=1} d^{-i/2} |T_i - pi_i|.
/// Spans must have equal length with index 0 present (ignored in the sum).
double lyapunov_phi(std::span<const double> T, std::span<const double> pi,
                    int d);

/// Decay rate delta = (sqrt(d) - 1)^2 in Phi(t) <= Phi(0) e^{-delta t}.
double lyapunov_rate(int d);

}  // namespace supermarket
