#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "supermarket/params.hpp"
#include "supermarket/rng.hpp"
#include "supermarket/sequences.hpp"
#include "supermarket/tail_counts.hpp"

namespace supermarket {

enum class EventType : std::uint8_t { Arrival, Departure };

struct Event {
  double time;
  std::uint32_t level;  // the tail count the event changed
  EventType type;
};

using EventLog = std::vector<Event>;

/// Two equivalent samplers for the next transition.
///   MinOfDraws: draw d uniform queue ranks, the arrival joins the shortest
///     (ties by the min itself); departures pick a uniform busy queue.
///   RateVector: explicit per-level rates
///     arrivals  lambda n ((q_{i-1}/n)^d - (q_i/n)^d),
///     departures q_i - q_{i+1},
///     sampled categorically. Slower; kept as the cross-check reference.
enum class StepScheme { MinOfDraws, RateVector };

struct StepResult {
  Event event{};
  double holding = 0.0;  // exponential holding time before the event
  bool absorbed = false; // no transition possible (lambda = 0, empty system)
};

/// One CTMC transition applied in place. Absorbed leaves state untouched.
StepResult step(TailCounts& state, const ModelParams& p, Rng& rng,
                StepScheme scheme = StepScheme::MinOfDraws);

struct SimulateOptions {
  double horizon = 1.0;
  double grid_dt = 0.1;
  std::size_t levels = 8;       // tracked levels 0..levels
  bool record_fractions = false;
  bool record_events = false;
  StepScheme scheme = StepScheme::MinOfDraws;
};

struct SimulateResult {
  GridPath scaled;     // T_i = eta (1 - q_i/n) on the grid, levels 0..levels
  GridPath fractions;  // S_i = q_i/n, only when record_fractions
  EventLog events;     // only when record_events
  TailCounts final_state;
  std::uint64_t event_count = 0;
};

/// Simulates from `init` to the horizon, recording the rescaled process at
/// grid multiples of grid_dt (cadlag: a grid value reflects all events with
/// time <= grid time).
SimulateResult simulate_path(const TailCounts& init, const ModelParams& p,
                             const SimulateOptions& opts, RngSpec rng);

/// First grid time where T_i >= eta^alpha for some level 1 <= i <= i_star.
/// Empty when the path never crosses (or i_star < 1). The path must track
/// at least the levels below i_star.
std::optional<double> detect_stopping(const GridPath& scaled,
                                      const ModelParams& p);

struct SteadyEstimate {
  std::size_t level = 0;
  double mean = 0.0;    // time-average of S_level over the sample window
  double se = 0.0;      // batch-means standard error
  int batches = 0;
};

struct SteadyOptions {
  double burn_in = 0.0;
  double sample_time = 1.0;  // split into `batches` equal batches
  int batches = 20;
  std::size_t levels = 8;
  StepScheme scheme = StepScheme::MinOfDraws;
};

/// Time-average estimates of E S_i in steady state for i = 0..levels, from a
/// single trajectory started at `init` (empty system when not given).
std::vector<SteadyEstimate> steady_state_sample(
    const ModelParams& p, const SteadyOptions& opts, RngSpec rng,
    const std::optional<TailCounts>& init = std::nullopt);

}  // namespace supermarket
