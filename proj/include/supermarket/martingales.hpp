#pragma once

#include "supermarket/params.hpp"
#include "supermarket/sequences.hpp"
#include "supermarket/simulator.hpp"

namespace supermarket {

/// Arrival and departure martingales of the rescaled process on a grid:
///   M_i(t) = (eta/n) A_i(t)
///            - lambda d Int_0^t (T_i - T_{i-1} - g(T_i) + g(T_{i-1})) ds
///   N_i(t) = (eta/n) D_i(t) - Int_0^t (T_{i+1} - T_i) ds
/// where A_i / D_i count arrivals into / departures from tail level i.
/// Both start at zero, and the reconstruction identity
///   T_i(t) = T_i(0) - M_i(t) - (compensator of M) + N_i(t) + (comp. of N)
/// collapses to T_i(t) = T_i(0) - (eta/n) A_i(t) + (eta/n) D_i(t).
struct MartingalePath {
  GridPath M;
  GridPath N;
};

/// Replays an event log from `init`, integrating the compensators exactly
/// between events (the integrands are piecewise constant). Levels 0..levels
/// are produced; level 0 is identically zero. Throws std::invalid_argument
/// on an unsorted, out-of-range, or replay-inconsistent log.
MartingalePath extract_martingales(const TailCounts& init, const EventLog& log,
                                   const ModelParams& p, std::size_t levels,
                                   double horizon, double grid_dt);

}  // namespace supermarket
