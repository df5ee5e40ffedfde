#pragma once

#include <span>

#include "supermarket/eta.hpp"
#include "supermarket/sequences.hpp"
#include "supermarket/tail_counts.hpp"

namespace supermarket {

// Deterministic starting profiles for the experiments.
//
// The geometric family targets T_i(0) = c * d^i, capped at eta when eta is
// finite (T_0 = 0 always).  Equivalently a fraction max(0, 1 - c * d^i / eta)
// of the queues holds at least i jobs.

/// Scaled profile of length levels + 1 (indices 0..levels).
RealSeq geometric_profile_limit(int d, const Eta& eta, double c, int levels);

/// Scaled target c * d^{min(i, knee)} (T_0 = 0), geometric through the knee
/// and constant above it. Geometrics and constants both lie in the kernel of
/// the limit drift, so the path only moves near the T_0 pin and the knee;
/// the same finite sequence serves every ladder rung.
RealSeq plateau_profile_limit(int d, double c, int knee, int levels);

/// Integer occupancy realizing an explicit scaled target (levels 0..D with
/// T_0 == 0, nondecreasing, T_i <= eta). Queues deeper than D are left
/// empty, i.e. the realized T_i sits at eta above the target's end. Queues
/// are apportioned to exact-length classes by largest remainder: every class
/// count is within one queue of its share n * (S_i - S_{i+1}), so the scaled
/// rounding error per level is O(eta / n).
TailCounts profile_state(std::int64_t n, double eta,
                         std::span<const double> target);

/// The capped geometric target realized at finite n; profile_state applied
/// to min(c d^i, eta) up to where the cap bites.
TailCounts geometric_profile_state(std::int64_t n, int d, double eta, double c);

}  // namespace supermarket
