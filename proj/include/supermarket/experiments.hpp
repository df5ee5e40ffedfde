#pragma once

#include <cstdint>
#include <vector>

#include "supermarket/limit_ode.hpp"
#include "supermarket/sequences.hpp"
#include "supermarket/simulator.hpp"

namespace supermarket {

// Transient convergence experiment.  For each n in an ascending ladder (with
// eta_n = sqrt(n) and lambda_n = 1 - beta/eta_n), runs R replications from
// the geometric starting profile, averages the rescaled path on the grid,
// and compares against the limiting system integrated from the matching
// uncapped profile.  Martingale path norms come from the same runs.

struct ConvergeSettings {
  std::vector<std::int64_t> ladder{1000, 10000, 100000};
  int d = 2;
  double beta = 2.0;
  double c = 0.5;         // starting profile T_i(0) ~ c d^i
  int replications = 20;
  double horizon = 5.0;
  double grid_dt = 0.02;  // shared by the simulation grid and the limit
  int i0 = 5;             // levels entering the discrepancy
  int ode_levels = 30;    // truncation of the limit integration
  double rho = 4.0;
  double alpha = 0.4;
  std::uint64_t seed = 1;
  int workers = 1;
  StepScheme scheme = StepScheme::MinOfDraws;
};

struct ConvergeRow {
  std::int64_t n = 0;
  double eta = 0.0;
  int replications = 0;
  double e_n = 0.0;   // max_{i <= i0} sup_grid |mean T^n_i - T_i|
  double e_se = 0.0;  // SE of the replication mean at the arg max
  int argmax_level = 0;
  double argmax_t = 0.0;
  double m_norm_mean = 0.0;  // mean ||M^n||_{rho,horizon} across replications
  double m_norm_se = 0.0;
  double n_norm_mean = 0.0;  // mean ||N^n||_{rho,horizon}
  double n_norm_se = 0.0;
};

struct ConvergeReport {
  GridPath limit;  // integrated limit, levels 0..i0
  std::vector<ConvergeRow> rows;
};

/// Throws std::invalid_argument when a rung's starting profile leaves the
/// stopped region (T_i(0) > eta^alpha for some level i <= i_star).
ConvergeReport converge_experiment(const ConvergeSettings& s);

// Expectation growth check: sample mean of ||T^n||_{rho,t} across
// replications against (||T^n(0)||_rho) e^{rho t} + 3 SE, rho = d + 1.

struct GrowthSettings {
  std::int64_t n = 10000;
  int d = 2;
  double beta = 2.0;
  double c = 0.5;
  int replications = 50;
  double t = 2.0;
  double grid_dt = 0.02;
  int levels = 8;
  std::uint64_t seed = 1;
  int workers = 1;
  StepScheme scheme = StepScheme::MinOfDraws;
};

struct GrowthReport {
  double rho = 0.0;
  double init_norm = 0.0;  // ||T^n(0)||_rho (deterministic profile)
  double mean_norm = 0.0;  // mean ||T^n||_{rho,t}
  double se = 0.0;
  double bound = 0.0;      // init_norm * e^{rho t} + 3 se
  bool holds = false;
};

GrowthReport growth_experiment(const GrowthSettings& s);

}  // namespace supermarket
