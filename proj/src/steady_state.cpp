#include "supermarket/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "supermarket/ensemble.hpp"

namespace supermarket {

double expectation_lower_bound(double lambda, int d, int i) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0,1)");
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (i < 0) throw std::invalid_argument("level must be >= 0");
  // (d^i - 1)/(d - 1) summed explicitly; exact for small i, monotone always.
  double geom = 0.0, power = 1.0;
  for (int j = 0; j < i; ++j) {
    geom += power;
    power *= d;
  }
  return 1.0 - (1.0 - lambda) * geom;
}

double heuristic_limit(double beta, int d, int k) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  return std::exp(-beta * std::pow(static_cast<double>(d), k) /
                  (static_cast<double>(d) - 1.0));
}

std::vector<BoundCheck> verify_bound(const ModelParams& p,
                                     const std::vector<SteadyEstimate>& estimates) {
  std::vector<BoundCheck> checks;
  checks.reserve(estimates.size());
  for (const auto& est : estimates) {
    BoundCheck c;
    c.level = est.level;
    c.mean = est.mean;
    c.se = est.se;
    c.bound = expectation_lower_bound(p.lambda, p.d, static_cast<int>(est.level));
    c.margin = c.mean - (c.bound - 3.0 * c.se);
    c.pass = c.margin >= 0.0;
    checks.push_back(c);
  }
  return checks;
}

std::vector<Figure1Row> figure1_experiment(const Figure1Settings& s) {
  if (s.n_list.empty() || s.k_list.empty()) return {};
  if (!std::is_sorted(s.n_list.begin(), s.n_list.end()))
    throw std::invalid_argument("n_list must be ascending");
  if (s.chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (!(s.alpha_exp > 0.0 && s.alpha_exp < 1.0))
    throw std::invalid_argument("alpha_exp must be in (0,1)");

  const double logd = std::log(static_cast<double>(s.d));
  const int k_max = *std::max_element(s.k_list.begin(), s.k_list.end());

  struct Setup {
    ModelParams params;
    int base_level = 0;
    std::size_t levels = 0;
  };
  std::vector<Setup> setups;
  setups.reserve(s.n_list.size());
  for (std::int64_t n : s.n_list) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    double nd = static_cast<double>(n);
    double eta = std::pow(nd, s.alpha_exp);
    double lambda = 1.0 - s.beta * std::pow(nd, -s.alpha_exp);
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("n = " + std::to_string(n) +
                                  " gives lambda outside (0,1)");
    Setup su;
    su.params.n = n;
    su.params.d = s.d;
    su.params.lambda = lambda;
    su.params.beta = s.beta;
    su.params.eta = Eta::finite(eta);
    su.params.validate();
    su.base_level = static_cast<int>(std::lround(s.alpha_exp * std::log(nd) / logd));
    int top = su.base_level + std::max(k_max, 0);
    if (top < 0) throw std::invalid_argument("negative level requested");
    su.levels = static_cast<std::size_t>(top);
    setups.push_back(su);
  }

  // One task per (n, chain); chains are pooled with equal weights, so the
  // pooled variance is the mean of the per-chain variances over chains.
  const std::size_t chains = static_cast<std::size_t>(s.chains);
  std::vector<std::vector<SteadyEstimate>> chain_estimates(setups.size() * chains);
  run_tasks_parallel(chain_estimates.size(), s.workers, [&](std::size_t task) {
    const Setup& su = setups[task / chains];
    double eta = su.params.eta.value();
    SteadyOptions so;
    so.burn_in = s.burn_factor * eta;
    so.sample_time = s.sample_factor * eta;
    so.batches = s.batches;
    so.levels = su.levels;
    so.scheme = s.scheme;
    chain_estimates[task] = steady_state_sample(
        su.params, so, RngSpec{s.seed, static_cast<std::uint64_t>(task)});
  });

  std::vector<Figure1Row> rows;
  rows.reserve(setups.size() * s.k_list.size());
  for (std::size_t j = 0; j < setups.size(); ++j) {
    const Setup& su = setups[j];
    for (int k : s.k_list) {
      int level = su.base_level + k;
      if (level < 0) throw std::invalid_argument("negative level requested");
      Figure1Row row;
      row.n = su.params.n;
      row.d = s.d;
      row.beta = s.beta;
      row.alpha = s.alpha_exp;
      row.level = level;
      row.k = k;
      double mean = 0.0, var = 0.0;
      for (std::size_t c = 0; c < chains; ++c) {
        const auto& est = chain_estimates[j * chains + c].at(static_cast<std::size_t>(level));
        mean += est.mean;
        var += est.se * est.se;
      }
      row.mean = mean / static_cast<double>(chains);
      row.se = std::sqrt(var) / static_cast<double>(chains);
      row.bound = expectation_lower_bound(su.params.lambda, s.d, level);
      row.heuristic = heuristic_limit(s.beta, s.d, k);
      row.pass = row.mean >= row.bound - 3.0 * row.se;
      rows.push_back(row);
    }
  }
  return rows;
}

VanishingReport short_queue_vanishing(const ModelParams& p, double omega,
                                      const std::vector<SteadyEstimate>& estimates) {
  double eta = p.eta.value();
  double raw = std::log(eta) / std::log(static_cast<double>(p.d)) - omega;
  if (raw < 0.0) throw std::invalid_argument("omega exceeds log_d eta");
  auto level = static_cast<std::size_t>(std::floor(raw));

  VanishingReport rep;
  rep.level = level;
  rep.omega = omega;
  rep.threshold = 1.0 - 2.0 * std::pow(static_cast<double>(p.d), -omega);

  auto it = std::find_if(estimates.begin(), estimates.end(),
                         [&](const SteadyEstimate& e) { return e.level == level; });
  if (it == estimates.end())
    throw std::invalid_argument("estimates do not cover level " + std::to_string(level));
  rep.mean = it->mean;
  rep.se = it->se;
  if (omega > 0.0) rep.pass = rep.mean >= rep.threshold;
  return rep;
}

}  // namespace supermarket
