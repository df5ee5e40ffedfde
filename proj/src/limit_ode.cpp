#include "supermarket/limit_ode.hpp"

#include <cmath>

namespace supermarket {

double phantom_level(std::span<const double> T, int d, Closure closure) {
  if (T.size() < 2) throw std::invalid_argument("state needs levels 0..L, L >= 1");
  const std::size_t L = T.size() - 1;
  switch (closure) {
    case Closure::Zero:
      return 0.0;
    case Closure::Geometric:
      return (d + 1) * T[L] - d * T[L - 1];
    case Closure::Frozen:
      return T[L];
  }
  throw std::logic_error("unknown closure");
}

RealSeq rhs_limit(std::span<const double> T, int d, Closure closure) {
  if (d < 2) throw std::invalid_argument("rhs_limit needs d >= 2");
  const std::size_t L = T.size() - 1;
  RealSeq r(T.size(), 0.0);
  for (std::size_t i = 1; i < L; ++i) {
    r[i] = (d * T[i - 1] - (d + 1) * T[i]) + T[i + 1];
  }
  if (L >= 1) {
    r[L] = (d * T[L - 1] - (d + 1) * T[L]) + phantom_level(T, d, closure);
  }
  return r;
}

namespace {

// rhs evaluated into a preallocated buffer; same grouping as rhs_limit.
void eval_rhs(std::span<const double> T, int d, Closure closure, RealSeq& out) {
  const std::size_t L = T.size() - 1;
  out[0] = 0.0;
  for (std::size_t i = 1; i < L; ++i) {
    out[i] = (d * T[i - 1] - (d + 1) * T[i]) + T[i + 1];
  }
  out[L] = (d * T[L - 1] - (d + 1) * T[L]) + phantom_level(T, d, closure);
}

}  // namespace

GridPath integrate_limit(const RealSeq& init, int d, double horizon, double dt,
                         const IntegrateOptions& opts) {
  if (d < 2) throw std::invalid_argument("integrate_limit needs d >= 2");
  if (init.size() < 2) {
    throw std::invalid_argument("integrate_limit needs levels 0..L, L >= 1");
  }
  if (init[0] != 0.0) {
    throw std::invalid_argument("integrate_limit needs T_0(0) == 0");
  }
  if (!(dt > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("integrate_limit needs dt > 0, horizon >= 0");
  }

  const std::size_t L = init.size() - 1;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  if (std::abs(steps * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw std::invalid_argument("horizon must be a whole multiple of dt");
  }

  GridPath path;
  path.grid.resize(steps + 1);
  path.levels.assign(L + 1, RealSeq(steps + 1));

  RealSeq y = init, k1(L + 1), k2(L + 1), k3(L + 1), k4(L + 1), tmp(L + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    path.grid[k] = k * dt;
    for (std::size_t i = 0; i <= L; ++i) path.levels[i][k] = y[i];
    if (rho_norm(y, opts.divergence_rho) > opts.divergence_limit) {
      throw SolverFault("integrate_limit: ||T||_rho exceeded " +
                        std::to_string(opts.divergence_limit) + " at t=" +
                        std::to_string(k * dt));
    }
    if (k == steps) break;

    eval_rhs(y, d, opts.closure, k1);
    for (std::size_t i = 0; i <= L; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    eval_rhs(tmp, d, opts.closure, k2);
    for (std::size_t i = 0; i <= L; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    eval_rhs(tmp, d, opts.closure, k3);
    for (std::size_t i = 0; i <= L; ++i) tmp[i] = y[i] + dt * k3[i];
    eval_rhs(tmp, d, opts.closure, k4);
    for (std::size_t i = 0; i <= L; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return path;
}

}  // namespace supermarket
