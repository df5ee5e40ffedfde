#include "supermarket/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace supermarket {

double ModelParams::i_star() const {
  if (eta.is_infinite()) return std::numeric_limits<double>::infinity();
  return istar_scale * alpha * std::log(eta.value()) / std::log(rho);
}

bool ModelParams::heavy_traffic_admissible() const {
  if (eta.is_infinite()) return false;
  return eta.value() <= q_bound * std::sqrt(static_cast<double>(n));
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (!(lambda >= 0.0 && lambda <= 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("alpha must lie in (0, 1/2)");
  }
  if (!(rho > 1.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rho must be > 1");
  }
  if (!(istar_scale > 0.0 && istar_scale < 1.0)) {
    throw std::invalid_argument("istar_scale must lie in (0, 1)");
  }
  if (!(q_bound > 0.0)) {
    throw std::invalid_argument("q_bound must be positive");
  }
}

ModelParams heavy_traffic_params(std::int64_t n, int d, double beta, Eta eta,
                                 double alpha, double rho) {
  ModelParams p;
  p.n = n;
  p.d = d;
  p.beta = beta;
  p.eta = eta;
  p.alpha = alpha;
  p.rho = rho;
  if (eta.is_infinite()) {
    p.lambda = 1.0;
  } else {
    if (!(beta < eta.value())) {
      throw std::invalid_argument("heavy traffic needs beta < eta, got beta=" +
                                  std::to_string(beta));
    }
    p.lambda = 1.0 - beta / eta.value();
  }
  p.validate();
  return p;
}

}  // namespace supermarket
