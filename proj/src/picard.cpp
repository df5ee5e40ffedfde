#include "supermarket/picard.hpp"

#include <algorithm>
#include <cmath>

#include "supermarket/correction.hpp"

namespace supermarket {

namespace {

// Piecewise-constant (cadlag) evaluation of y: value at the last grid node
// <= t, zero before the first node and for levels y does not carry.
struct YView {
  const GridPath* y = nullptr;

  double at(std::size_t level, double t) const {
    if (y == nullptr || level >= y->levels.size()) return 0.0;
    const auto& g = y->grid;
    if (g.empty() || t < g.front()) return 0.0;
    auto it = std::upper_bound(g.begin(), g.end(), t);
    return y->levels[level][static_cast<std::size_t>(it - g.begin()) - 1];
  }
};

// Exit rule for the region B(eta): levels 1..cap must stay below eta^alpha
// in absolute value, levels above cap below eta + 1.
struct StopRule {
  bool active = false;
  double eta_alpha = 0.0;
  double upper = 0.0;
  std::size_t cap = 0;

  // x is level-major segment storage; tests node k.
  bool violated(const std::vector<RealSeq>& x, std::size_t k) const {
    if (!active) return false;
    const std::size_t L = x.size() - 1;
    for (std::size_t i = 1; i <= L; ++i) {
      const double v = std::abs(x[i][k]);
      if (i <= cap ? v >= eta_alpha : v > upper) return true;
    }
    return false;
  }

  // first violating node in [1, s], or -1
  std::ptrdiff_t first_violation(const std::vector<RealSeq>& x,
                                 std::size_t s) const {
    if (!active) return -1;
    for (std::size_t k = 1; k <= s; ++k) {
      if (violated(x, k)) return static_cast<std::ptrdiff_t>(k);
    }
    return -1;
  }
};

double phantom_at(const std::vector<RealSeq>& x, std::size_t L, int d,
                  Closure closure, std::size_t k) {
  switch (closure) {
    case Closure::Zero:
      return 0.0;
    case Closure::Geometric:
      return (d + 1) * x[L][k] - d * x[L - 1][k];
    case Closure::Frozen:
      return x[L][k];
  }
  return 0.0;
}

}  // namespace

PicardResult picard_solve(const PicardInput& in, double horizon,
                          double grid_dt, const PicardOptions& opts) {
  if (in.d < 2) throw std::invalid_argument("picard_solve needs d >= 2");
  if (in.b.size() < 2) {
    throw std::invalid_argument("picard_solve needs levels 0..L, L >= 1");
  }
  if (in.b[0] != 0.0) throw std::invalid_argument("picard_solve needs b_0 == 0");
  if (!(in.lambda >= 0.0 && in.lambda <= 1.0)) {
    throw std::invalid_argument("picard_solve needs lambda in [0, 1]");
  }
  if (!(in.rho > 1.0)) throw std::invalid_argument("picard_solve needs rho > 1");
  if (!(grid_dt > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("picard_solve needs grid_dt > 0, horizon >= 0");
  }
  if (!(opts.gamma_target > 0.0 && opts.gamma_target < 1.0)) {
    throw std::invalid_argument("gamma_target must lie in (0, 1)");
  }
  if (!in.y.grid.empty()) in.y.validate();

  const std::size_t L = in.b.size() - 1;
  const auto K = static_cast<std::size_t>(std::llround(horizon / grid_dt));
  if (std::abs(K * grid_dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw std::invalid_argument("horizon must be a whole multiple of grid_dt");
  }

  // Segment geometry: contraction modulus gamma_target needs segments no
  // longer than gamma_target / k_bound.
  const double k_bound =
      in.lambda * in.d * (1.0 + 1.0 / in.rho) * (1.0 + g_lipschitz_bound(in.d)) +
      1.0 + in.rho;
  const double t0 = opts.gamma_target / k_bound;
  const double h_cap = std::min(t0, opts.max_internal_dt);
  const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(grid_dt / h_cap - 1e-12)));
  const double h = grid_dt / m;
  const std::size_t total_steps = K * m;
  const auto seg_steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(t0 / h + 1e-12)));

  PicardResult res;
  res.path.grid.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) res.path.grid[k] = k * grid_dt;
  res.path.levels.assign(L + 1, RealSeq(K + 1, 0.0));

  YView yv{in.y.grid.empty() ? nullptr : &in.y};

  StopRule stop;
  if (in.eta.is_finite()) {
    const double e = in.eta.value();
    stop.active = true;
    stop.eta_alpha = std::pow(e, in.alpha);
    stop.upper = e + 1.0;
    const double istar =
        in.istar_scale * in.alpha * std::log(e) / std::log(in.rho);
    stop.cap = std::min<std::size_t>(
        L, static_cast<std::size_t>(std::max(0.0, std::floor(istar))));
  }

  // State at t = 0 is b + y(0); the integrals vanish there.
  RealSeq start(L + 1, 0.0);
  for (std::size_t i = 1; i <= L; ++i) start[i] = in.b[i] + yv.at(i, 0.0);
  for (std::size_t i = 0; i <= L; ++i) res.path.levels[i][0] = start[i];

  auto freeze_output_from = [&](std::size_t out_from, const RealSeq& value) {
    for (std::size_t k = out_from; k <= K; ++k) {
      for (std::size_t i = 0; i <= L; ++i) res.path.levels[i][k] = value[i];
    }
  };

  {
    // t* = 0: the initial point already violates B.
    std::vector<RealSeq> x0(L + 1);
    for (std::size_t i = 0; i <= L; ++i) x0[i] = {start[i]};
    if (stop.violated(x0, 0)) {
      res.t_star = 0.0;
      freeze_output_from(1, start);
      return res;
    }
  }

  std::vector<RealSeq> cur(L + 1), nxt(L + 1), gcur(L + 1);
  std::vector<RealSeq> yinc(L + 1);

  std::size_t gk = 0;  // internal step index at segment start
  bool stopped = false;

  while (gk < total_steps && !stopped) {
    const std::size_t s = std::min(seg_steps, total_steps - gk);
    const double t_a = gk * h;
    for (std::size_t i = 0; i <= L; ++i) {
      cur[i].assign(s + 1, start[i]);
      nxt[i].assign(s + 1, start[i]);
      gcur[i].assign(s + 1, 0.0);
      yinc[i].assign(s + 1, 0.0);
    }
    for (std::size_t i = 1; i <= L; ++i) {
      const double y_a = yv.at(i, t_a);
      for (std::size_t j = 1; j <= s; ++j) {
        yinc[i][j] = yv.at(i, (gk + j) * h) - y_a;
      }
    }

    bool converged = false;
    double prev_diff = -1.0;
    for (int it = 0; it < opts.max_iters; ++it) {
      ++res.total_iterations;

      // Gamma-hat: integrals stop at the input iterate's own exit node.
      const std::ptrdiff_t cur_stop = stop.first_violation(cur, s);

      if (in.eta.is_finite()) {
        for (std::size_t i = 1; i <= L; ++i) {
          for (std::size_t j = 0; j <= s; ++j) {
            gcur[i][j] = g_eval(in.eta, in.d, cur[i][j]);
          }
        }
      }

      const double ld = in.lambda * in.d;
      for (std::size_t i = 1; i <= L; ++i) {
        const RealSeq& lo = cur[i - 1];
        const RealSeq& me = cur[i];
        const RealSeq& glo = gcur[i - 1];
        const RealSeq& gme = gcur[i];
        double accf = 0.0, accq = 0.0;
        double fprev = ld * (me[0] - lo[0] - gme[0] + glo[0]);
        double qprev = (i < L ? cur[i + 1][0]
                              : phantom_at(cur, L, in.d, opts.closure, 0)) -
                       me[0];
        for (std::size_t j = 1; j <= s; ++j) {
          const double fj = ld * (me[j] - lo[j] - gme[j] + glo[j]);
          const double qj = (i < L ? cur[i + 1][j]
                                   : phantom_at(cur, L, in.d, opts.closure, j)) -
                            me[j];
          accf += 0.5 * h * (fprev + fj);
          accq += 0.5 * h * (qprev + qj);
          nxt[i][j] = start[i] + yinc[i][j] - accf + accq;
          fprev = fj;
          qprev = qj;
        }
      }
      if (cur_stop >= 0) {
        const auto ks = static_cast<std::size_t>(cur_stop);
        for (std::size_t i = 1; i <= L; ++i) {
          const double frozen = nxt[i][ks];
          for (std::size_t j = ks + 1; j <= s; ++j) nxt[i][j] = frozen;
        }
      }

      double diff = 0.0;
      for (std::size_t i = L + 1; i-- > 0;) {
        double sup = 0.0;
        for (std::size_t j = 1; j <= s; ++j) {
          sup = std::max(sup, std::abs(nxt[i][j] - cur[i][j]));
        }
        diff = diff / in.rho + sup;
      }
      cur.swap(nxt);
      if (it > 0 && prev_diff > 0.0) {
        res.contraction_ratios.push_back(diff / prev_diff);
      }
      if (diff <= opts.tol) {
        converged = true;
        break;
      }
      prev_diff = diff;
    }
    if (!converged) {
      throw SolverFault("picard_solve: segment at t=" + std::to_string(t_a) +
                        " did not converge in " +
                        std::to_string(opts.max_iters) + " iterations");
    }
    ++res.segments;

    for (std::size_t j = 1; j <= s; ++j) {
      const std::size_t idx = gk + j;
      if (idx % m == 0) {
        for (std::size_t i = 0; i <= L; ++i) {
          res.path.levels[i][idx / m] = cur[i][j];
        }
      }
    }

    const std::ptrdiff_t final_stop = stop.first_violation(cur, s);
    if (final_stop >= 0) {
      stopped = true;
      const auto ks = static_cast<std::size_t>(final_stop);
      res.t_star = (gk + ks) * h;
      RealSeq frozen(L + 1);
      for (std::size_t i = 0; i <= L; ++i) frozen[i] = cur[i][ks];
      // output nodes inside the segment past ks were already frozen values;
      // fill everything after the segment too
      freeze_output_from((gk + s) / m + 1, frozen);
    } else {
      for (std::size_t i = 0; i <= L; ++i) start[i] = cur[i][s];
      gk += s;
    }
  }
  return res;
}

GrowthBoundReport growth_bound_check(const PicardResult& result,
                                     const PicardInput& in) {
  GrowthBoundReport rep;
  rep.rate = in.lambda * in.d * (1.0 + g_lipschitz_bound(in.d)) *
                 (1.0 + 1.0 / in.rho) +
             1.0 + in.rho;
  const double bnorm = rho_norm(in.b, in.rho);

  // Prefix path norms of y on its own grid.
  RealSeq ynorm_prefix;
  if (!in.y.grid.empty()) {
    in.y.validate();
    const std::size_t ny = in.y.grid.size();
    ynorm_prefix.assign(ny, 0.0);
    RealSeq sup(in.y.levels.size(), 0.0);
    for (std::size_t k = 0; k < ny; ++k) {
      double acc = 0.0;
      for (std::size_t i = sup.size(); i-- > 0;) {
        sup[i] = std::max(sup[i], std::abs(in.y.levels[i][k]));
        acc = acc / in.rho + sup[i];
      }
      ynorm_prefix[k] = acc;
    }
  }
  auto ynorm_at = [&](double t) -> double {
    if (ynorm_prefix.empty() || t < in.y.grid.front()) return 0.0;
    auto it = std::upper_bound(in.y.grid.begin(), in.y.grid.end(), t);
    return ynorm_prefix[static_cast<std::size_t>(it - in.y.grid.begin()) - 1];
  };

  const auto& p = result.path;
  RealSeq sup(p.levels.size(), 0.0);
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    double lhs = 0.0;
    for (std::size_t i = sup.size(); i-- > 0;) {
      sup[i] = std::max(sup[i], std::abs(p.levels[i][k]));
      lhs = lhs / in.rho + sup[i];
    }
    const double t = p.grid[k];
    const double rhs = (bnorm + ynorm_at(t)) * std::exp(rep.rate * t);
    const double ratio = rhs > 0.0 ? lhs / rhs
                                   : (lhs > 0.0
                                          ? std::numeric_limits<double>::infinity()
                                          : 0.0);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_t = t;
    }
  }
  rep.holds = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

}  // namespace supermarket
