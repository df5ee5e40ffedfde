#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "supermarket/params.hpp"
#include "supermarket/simulator.hpp"

namespace supermarket {

/// Lower bound on E S_i in steady state: 1 - (1-lambda)(d^i - 1)/(d - 1).
/// May be negative (vacuous) for large i.
double expectation_lower_bound(double lambda, int d, int i);

/// exp(-beta d^k / (d - 1)): the conjectured limit of E S at level
/// log_d(eta) + k under lambda = 1 - beta/eta.
double heuristic_limit(double beta, int d, int k);

struct BoundCheck {
  std::size_t level = 0;
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // mean - (bound - 3 se)
  bool pass = false;
};

/// One check per estimate: PASS iff mean >= bound - 3 se.  The bound is a
/// guarantee of the model, so a failure beyond the statistical slack
/// indicates a defect.
std::vector<BoundCheck> verify_bound(const ModelParams& p,
                                     const std::vector<SteadyEstimate>& estimates);

// Steady-state sweep over n with eta_n = n^alpha_exp and
// lambda_n = 1 - beta n^{-alpha_exp}, reporting E S at the levels
// round(alpha_exp log_d n) + k against the heuristic limits.

struct Figure1Settings {
  double beta = 2.0;
  double alpha_exp = 0.75;
  int d = 2;
  std::vector<std::int64_t> n_list{1024, 2048, 4096, 8192, 16384};
  std::vector<int> k_list{0, 1};
  int chains = 2;               // independent chains pooled per n
  int batches = 20;             // batch means per chain
  double burn_factor = 10.0;    // burn-in = burn_factor * eta_n
  double sample_factor = 50.0;  // sampling time = sample_factor * eta_n
  std::uint64_t seed = 1;
  int workers = 1;
  StepScheme scheme = StepScheme::MinOfDraws;
};

struct Figure1Row {
  std::int64_t n = 0;
  int d = 2;
  double beta = 0.0;
  double alpha = 0.0;
  int level = 0;
  int k = 0;
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;      // expectation lower bound at this level
  double heuristic = 0.0;  // exp(-beta d^k/(d-1))
  bool pass = false;       // mean >= bound - 3 se
};

/// One row per (n, k), n ascending then k ascending.  Rejects any n whose
/// derived lambda_n leaves (0, 1).
std::vector<Figure1Row> figure1_experiment(const Figure1Settings& s);

struct VanishingReport {
  std::size_t level = 0;
  double omega = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double threshold = 0.0;    // 1 - 2 d^{-omega}
  std::optional<bool> pass;  // empty when omega <= 0 (threshold vacuous there)
};

/// Checks E S at level floor(log_d eta - omega) against 1 - 2 d^{-omega}.
/// The estimates must cover that level, and it must be nonnegative.
VanishingReport short_queue_vanishing(const ModelParams& p, double omega,
                                      const std::vector<SteadyEstimate>& estimates);

}  // namespace supermarket
