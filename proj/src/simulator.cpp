#include "supermarket/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace supermarket {

namespace {

struct Transition {
  bool absorbed = true;
  double holding = 0.0;
  std::size_t level = 0;
  EventType type = EventType::Arrival;
};

Transition sample_min_of_draws(const TailCounts& state, const ModelParams& p,
                               Rng& rng) {
  Transition tr;
  const auto n = static_cast<double>(state.n());
  const double arr = p.lambda * n;
  const auto busy = static_cast<double>(state.at(1));
  const double total = arr + busy;
  if (total <= 0.0) return tr;
  tr.absorbed = false;
  tr.holding = rng.exponential(total);
  if (rng.uniform01() * total < arr) {
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (int j = 0; j < p.d; ++j) {
      const auto rank = static_cast<std::int64_t>(
          rng.uniform_below(static_cast<std::uint64_t>(state.n())));
      shortest = std::min(shortest, state.length_of_rank(rank));
    }
    tr.level = shortest + 1;
    tr.type = EventType::Arrival;
  } else {
    const auto rank = static_cast<std::int64_t>(
        rng.uniform_below(static_cast<std::uint64_t>(state.at(1))));
    tr.level = state.length_of_rank(rank);
    tr.type = EventType::Departure;
  }
  return tr;
}

Transition sample_rate_vector(const TailCounts& state, const ModelParams& p,
                              Rng& rng) {
  Transition tr;
  const auto n = static_cast<double>(state.n());
  const std::size_t top = state.top();

  // arrival rates into levels 1..top+1, then departure rates from 1..top
  std::vector<double> rates;
  rates.reserve(2 * top + 1);
  double frac_prev = 1.0;  // (q_0/n)^d
  for (std::size_t i = 1; i <= top + 1; ++i) {
    const double frac = std::pow(state.fraction(i), p.d);
    rates.push_back(p.lambda * n * (frac_prev - frac));
    frac_prev = frac;
  }
  for (std::size_t i = 1; i <= top; ++i) {
    rates.push_back(static_cast<double>(state.at(i) - state.at(i + 1)));
  }

  double total = 0.0;
  for (double r : rates) total += r;
  if (total <= 0.0) return tr;
  tr.absorbed = false;
  tr.holding = rng.exponential(total);

  double u = rng.uniform01() * total;
  std::size_t pick = rates.size() - 1;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (u < rates[j]) {
      pick = j;
      break;
    }
    u -= rates[j];
  }
  // fp tail overflow: fall back to the last positive-rate bucket
  while (rates[pick] <= 0.0 && pick > 0) --pick;

  if (pick <= top) {
    tr.level = pick + 1;
    tr.type = EventType::Arrival;
  } else {
    tr.level = pick - top;
    tr.type = EventType::Departure;
  }
  return tr;
}

Transition sample_transition(const TailCounts& state, const ModelParams& p,
                             Rng& rng, StepScheme scheme) {
  return scheme == StepScheme::MinOfDraws ? sample_min_of_draws(state, p, rng)
                                          : sample_rate_vector(state, p, rng);
}

}  // namespace

StepResult step(TailCounts& state, const ModelParams& p, Rng& rng,
                StepScheme scheme) {
  if (state.n() != p.n) throw std::invalid_argument("step: state.n != params.n");
  StepResult res;
  Transition tr = sample_transition(state, p, rng, scheme);
  if (tr.absorbed) {
    res.absorbed = true;
    return res;
  }
  if (tr.type == EventType::Arrival) {
    state.apply_arrival(tr.level);
  } else {
    state.apply_departure(tr.level);
  }
  res.holding = tr.holding;
  res.event = Event{tr.holding, static_cast<std::uint32_t>(tr.level), tr.type};
  return res;
}

SimulateResult simulate_path(const TailCounts& init, const ModelParams& p,
                             const SimulateOptions& opts, RngSpec spec) {
  p.validate();
  if (p.eta.is_infinite()) {
    throw std::invalid_argument("simulate_path needs finite eta");
  }
  if (init.n() != p.n) {
    throw std::invalid_argument("simulate_path: init.n != params.n");
  }
  if (!(opts.grid_dt > 0.0) || !(opts.horizon >= 0.0) || opts.levels < 1) {
    throw std::invalid_argument("simulate_path: bad grid options");
  }
  const auto K =
      static_cast<std::size_t>(std::llround(opts.horizon / opts.grid_dt));
  if (std::abs(K * opts.grid_dt - opts.horizon) >
      1e-9 * std::max(1.0, opts.horizon)) {
    throw std::invalid_argument("horizon must be a whole multiple of grid_dt");
  }

  const double eta = p.eta.value();
  const auto n = static_cast<double>(p.n);
  const std::size_t I = opts.levels;

  SimulateResult res{GridPath{}, GridPath{}, {}, init, 0};
  res.scaled.grid.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) res.scaled.grid[k] = k * opts.grid_dt;
  res.scaled.levels.assign(I + 1, RealSeq(K + 1, 0.0));
  if (opts.record_fractions) {
    res.fractions.grid = res.scaled.grid;
    res.fractions.levels.assign(I + 1, RealSeq(K + 1, 0.0));
  }

  TailCounts state = init;
  Rng rng(spec);

  auto write_node = [&](std::size_t k) {
    for (std::size_t i = 0; i <= I; ++i) {
      const double frac = state.fraction(i);
      res.scaled.levels[i][k] = i == 0 ? 0.0 : eta * (n - state.at(i)) / n;
      if (opts.record_fractions) res.fractions.levels[i][k] = frac;
    }
  };

  double t = 0.0;
  std::size_t kg = 0;
  while (true) {
    Transition tr = sample_transition(state, p, rng, opts.scheme);
    const double te = tr.absorbed
                          ? std::numeric_limits<double>::infinity()
                          : t + tr.holding;
    while (kg <= K && res.scaled.grid[kg] < te) {
      write_node(kg);
      ++kg;
    }
    if (kg > K || te > opts.horizon) break;
    if (tr.type == EventType::Arrival) {
      state.apply_arrival(tr.level);
    } else {
      state.apply_departure(tr.level);
    }
    ++res.event_count;
    if (opts.record_events) {
      res.events.push_back(
          Event{te, static_cast<std::uint32_t>(tr.level), tr.type});
    }
    t = te;
  }
  while (kg <= K) {  // grid nodes at/after the last pre-horizon event
    write_node(kg);
    ++kg;
  }
  res.final_state = state;
  return res;
}

std::optional<double> detect_stopping(const GridPath& scaled,
                                      const ModelParams& p) {
  if (p.eta.is_infinite()) {
    throw std::invalid_argument("detect_stopping needs finite eta");
  }
  scaled.validate();
  const double threshold = std::pow(p.eta.value(), p.alpha);
  const auto cap = static_cast<std::size_t>(std::max(0.0, std::floor(p.i_star())));
  if (cap == 0) return std::nullopt;
  if (scaled.levels.size() < cap + 1) {
    throw std::invalid_argument(
        "detect_stopping: path tracks fewer levels than i_star");
  }
  for (std::size_t k = 0; k < scaled.grid.size(); ++k) {
    for (std::size_t i = 1; i <= cap; ++i) {
      if (scaled.levels[i][k] >= threshold) return scaled.grid[k];
    }
  }
  return std::nullopt;
}

std::vector<SteadyEstimate> steady_state_sample(
    const ModelParams& p, const SteadyOptions& opts, RngSpec spec,
    const std::optional<TailCounts>& init) {
  p.validate();
  if (opts.batches < 2) throw std::invalid_argument("need batches >= 2");
  if (!(opts.sample_time > 0.0) || !(opts.burn_in >= 0.0)) {
    throw std::invalid_argument("bad steady sampling window");
  }
  TailCounts state = init ? *init : TailCounts(p.n);
  if (state.n() != p.n) {
    throw std::invalid_argument("steady_state_sample: init.n != params.n");
  }

  const std::size_t I = opts.levels;
  const auto n = static_cast<double>(p.n);
  const double W = opts.burn_in;
  const double batch_len = opts.sample_time / opts.batches;
  const double end = W + opts.sample_time;

  Rng rng(spec);
  // Lazy time integrals of q_i: acc_i covers [max(last_i, W), current).
  std::vector<double> acc(I + 1, 0.0), last(I + 1, 0.0);
  std::vector<std::vector<double>> means(I + 1);

  auto flush = [&](std::size_t i, double upto) {
    const double lo = std::max(last[i], W);
    if (upto > lo) acc[i] += static_cast<double>(state.at(i)) * (upto - lo);
    last[i] = upto;
  };

  int next_batch = 1;
  double t = 0.0;
  while (next_batch <= opts.batches) {
    Transition tr = sample_transition(state, p, rng, opts.scheme);
    const double te = tr.absorbed
                          ? std::numeric_limits<double>::infinity()
                          : t + tr.holding;
    while (next_batch <= opts.batches && W + next_batch * batch_len <= te) {
      const double tb = W + next_batch * batch_len;
      for (std::size_t i = 0; i <= I; ++i) {
        flush(i, tb);
        means[i].push_back(acc[i] / (n * batch_len));
        acc[i] = 0.0;
      }
      ++next_batch;
    }
    if (next_batch > opts.batches || te > end) {
      if (next_batch <= opts.batches) {
        throw std::logic_error("steady_state_sample: window not covered");
      }
      break;
    }
    if (tr.type == EventType::Arrival) {
      if (tr.level <= I) flush(tr.level, te);
      state.apply_arrival(tr.level);
    } else {
      if (tr.level <= I) flush(tr.level, te);
      state.apply_departure(tr.level);
    }
    t = te;
  }

  std::vector<SteadyEstimate> out(I + 1);
  for (std::size_t i = 0; i <= I; ++i) {
    const auto B = static_cast<double>(opts.batches);
    double mean = 0.0;
    for (double m : means[i]) mean += m;
    mean /= B;
    double var = 0.0;
    for (double m : means[i]) var += (m - mean) * (m - mean);
    var /= (B - 1.0);
    out[i] = SteadyEstimate{i, mean, std::sqrt(var / B), opts.batches};
  }
  return out;
}

}  // namespace supermarket
