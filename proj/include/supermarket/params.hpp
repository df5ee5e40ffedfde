#pragma once

#include <cstdint>

#include "supermarket/eta.hpp"

namespace supermarket {

/// Model and scaling parameters for the d-choices system.
///
/// The rescaled process is T_i = eta * (1 - S_i) where S_i is the fraction of
/// queues with at least i jobs, so 0 <= T_i <= eta and T_0 == 0 always.
struct ModelParams {
  std::int64_t n = 1;   // number of servers
  int d = 2;            // choices per arrival, d >= 2
  double lambda = 0.5;  // per-server arrival rate, in [0, 1]
  double beta = 1.0;    // heavy-traffic constant, lambda = 1 - beta/eta
  Eta eta = Eta::finite(1.0);

  // Stopping-time geometry. The stopped region keeps |T_i| <= eta^alpha for
  // levels i <= i_star and |T_i| <= eta + 1 above.
  double alpha = 0.4;        // in (0, 1/2)
  double rho = 2.0;          // norm base, > 1
  double istar_scale = 0.5;  // in (0, 1); i_star = istar_scale*alpha*log_rho(eta)

  // Rate cap for the heavy-traffic regime: eta <= q_bound * sqrt(n).
  double q_bound = 1.0;

  /// i_star = istar_scale * alpha * log_rho(eta); +infinity when eta is.
  double i_star() const;

  /// Whether eta <= q_bound * sqrt(n) holds (the admissible growth rate).
  bool heavy_traffic_admissible() const;

  /// Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

/// Builds params with lambda derived from the heavy-traffic relation
/// lambda = 1 - beta/eta. Requires 0 < beta < eta for finite eta; the
/// infinite case gives lambda = 1.
ModelParams heavy_traffic_params(std::int64_t n, int d, double beta, Eta eta,
                                 double alpha = 0.4, double rho = 2.0);

}  // namespace supermarket
