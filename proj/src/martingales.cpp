#include "supermarket/martingales.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "supermarket/correction.hpp"

namespace supermarket {

MartingalePath extract_martingales(const TailCounts& init, const EventLog& log,
                                   const ModelParams& p, std::size_t levels,
                                   double horizon, double grid_dt) {
  p.validate();
  if (p.eta.is_infinite()) {
    throw std::invalid_argument("extract_martingales needs finite eta");
  }
  if (init.n() != p.n) {
    throw std::invalid_argument("extract_martingales: init.n != params.n");
  }
  if (levels < 1) throw std::invalid_argument("extract_martingales: levels >= 1");
  const auto K = static_cast<std::size_t>(std::llround(horizon / grid_dt));
  if (std::abs(K * grid_dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw std::invalid_argument("horizon must be a whole multiple of grid_dt");
  }

  const double eta = p.eta.value();
  const auto n = static_cast<double>(p.n);
  const std::size_t I = levels;

  MartingalePath out;
  out.M.grid.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) out.M.grid[k] = k * grid_dt;
  out.N.grid = out.M.grid;
  out.M.levels.assign(I + 1, RealSeq(K + 1, 0.0));
  out.N.levels.assign(I + 1, RealSeq(K + 1, 0.0));

  TailCounts state = init;

  // Cached rescaled values and correction terms for levels 0..I+1 / 0..I.
  RealSeq T(I + 2), g(I + 1);
  auto refresh_level = [&](std::size_t i) {
    if (i <= I + 1) T[i] = eta * (n - static_cast<double>(state.at(i))) / n;
    if (i >= 1 && i <= I) g[i] = g_eval(p.eta, p.d, T[i]);
  };
  for (std::size_t i = 0; i <= I + 1; ++i) refresh_level(i);
  T[0] = 0.0;
  g[0] = 0.0;

  // Piecewise-constant compensator integrands.
  RealSeq rate_a(I + 1, 0.0), rate_b(I + 1, 0.0);
  auto refresh_rates = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = std::max<std::size_t>(1, lo); i <= hi && i <= I; ++i) {
      rate_a[i] = p.lambda * p.d * (T[i] - T[i - 1] - g[i] + g[i - 1]);
      rate_b[i] = T[i + 1] - T[i];
    }
  };
  refresh_rates(1, I);

  std::vector<std::int64_t> A(I + 1, 0), D(I + 1, 0);
  RealSeq int_a(I + 1, 0.0), int_b(I + 1, 0.0);

  double t = 0.0;
  auto advance_to = [&](double tb) {
    const double dt = tb - t;
    for (std::size_t i = 1; i <= I; ++i) {
      int_a[i] += rate_a[i] * dt;
      int_b[i] += rate_b[i] * dt;
    }
    t = tb;
  };

  std::size_t kg = 0;
  auto write_nodes_below = [&](double te) {
    while (kg <= K && out.M.grid[kg] < te) {
      advance_to(out.M.grid[kg]);
      for (std::size_t i = 1; i <= I; ++i) {
        out.M.levels[i][kg] = (eta / n) * static_cast<double>(A[i]) - int_a[i];
        out.N.levels[i][kg] = (eta / n) * static_cast<double>(D[i]) - int_b[i];
      }
      ++kg;
    }
  };

  double prev_time = 0.0;
  for (const Event& ev : log) {
    if (!(ev.time >= prev_time) || !(ev.time <= horizon + 1e-9) || ev.level < 1) {
      throw std::invalid_argument(
          "extract_martingales: event log unsorted or out of range");
    }
    prev_time = ev.time;
    write_nodes_below(ev.time);
    advance_to(ev.time);
    try {
      if (ev.type == EventType::Arrival) {
        state.apply_arrival(ev.level);
        if (ev.level <= I) ++A[ev.level];
      } else {
        state.apply_departure(ev.level);
        if (ev.level <= I) ++D[ev.level];
      }
    } catch (const std::logic_error& e) {
      throw std::invalid_argument(
          std::string("extract_martingales: inconsistent event log: ") +
          e.what());
    }
    if (ev.level <= I + 1) {
      refresh_level(ev.level);
      // T_level feeds a_{level}, a_{level+1}, b_{level-1}, b_{level}
      refresh_rates(ev.level >= 1 ? ev.level - 1 : 0, ev.level + 1);
    }
  }
  write_nodes_below(std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace supermarket
