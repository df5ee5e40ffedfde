// Acceptance gate: one line per criterion, exit 0 iff all pass.
//
// Tolerances are pinned here on purpose; loosening one is a defect, not a
// tuning knob. Statistical criteria use fixed seeds so the binary is
// deterministic end to end.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "supermarket/ensemble.hpp"
#include "supermarket/experiments.hpp"
#include "supermarket/fixed_point.hpp"
#include "supermarket/initial_profile.hpp"
#include "supermarket/limit_ode.hpp"
#include "supermarket/picard.hpp"
#include "supermarket/rng.hpp"
#include "supermarket/simulator.hpp"
#include "supermarket/steady_state.hpp"

namespace fs = std::filesystem;
using namespace supermarket;

namespace {

int failures = 0;

using Outcome = std::pair<bool, std::string>;

// time_limit <= 0 means the criterion has no hard runtime bound.
template <typename Fn>
void criterion(int id, const char* label, double time_limit, Fn fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    Outcome out = fn();
    pass = out.first;
    detail = out.second;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (time_limit > 0.0 && secs > time_limit) {
    pass = false;
    detail += " [over time limit]";
  }
  if (!pass) ++failures;
  std::printf("[%2d] %s  %s: %s  (%.2f s)\n", id, pass ? "PASS" : "FAIL",
              label, detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool run_cli(const std::string& cmdline) {
  const int rc = std::system(cmdline.c_str());
  return rc == 0;
}

}  // namespace

int main() {
  // 1. The fixed-point family makes the drift vanish identically.
  criterion(1, "fixed-point residual", 1.0, [] {
    double worst = 0.0;
    for (int d : {2, 3, 4, 5}) {
      const RealSeq pi = fixed_point(d, 2.0, 30);
      const RealSeq r = rhs_limit(pi, d, Closure::Geometric);
      for (double v : r) worst = std::max(worst, std::abs(v));
    }
    return Outcome{worst < 1e-12,
                   "max |rhs(pi)| = " + num(worst) +
                       " over d in {2,3,4,5}, L = 30 (tol 1e-12)"};
  });

  // 2. Phi(t) <= Phi(0) exp(-(sqrt d - 1)^2 t) along the integrated path.
  criterion(2, "lyapunov decay", 5.0, [] {
    double worst = 0.0;
    for (int d : {2, 3}) {
      const std::size_t L = 40;
      const RealSeq pi = fixed_point(d, 2.0, L);
      RealSeq init = pi;
      init[1] += 1.0;
      // pi grows like d^i, so the divergence guard needs a norm base > d.
      IntegrateOptions io;
      io.divergence_rho = d + 1.0;
      const GridPath path = integrate_limit(init, d, 20.0, 0.01, io);
      const double phi0 = lyapunov_phi(init, pi, d);
      const double delta = lyapunov_rate(d);
      RealSeq state(pi.size());
      for (std::size_t k = 0; k < path.grid.size(); ++k) {
        for (std::size_t i = 0; i < state.size(); ++i)
          state[i] = path.levels[i][k];
        const double envelope = phi0 * std::exp(-delta * path.grid[k]);
        worst = std::max(worst, lyapunov_phi(state, pi, d) / envelope);
      }
    }
    return Outcome{worst <= 1.0 + 1e-6,
                   "max Phi(t)/envelope = " + num(worst) +
                       " for d in {2,3}, horizon 20 (tol 1 + 1e-6)"};
  });

  // 3 + 4. Picard vs RK4 on the unstopped system; recorded contraction
  // ratios stay below the design modulus.
  std::vector<double> ratios;
  criterion(3, "picard vs rk4", 30.0, [&ratios] {
    const int L = 20;
    const double horizon = 5.0, out_dt = 0.05, rk_dt = 1e-3;
    const double rho = 2.0;
    const auto stride = static_cast<std::size_t>(std::llround(out_dt / rk_dt));
    double worst = 0.0;
    Rng rng(RngSpec{2024, 0});
    for (int trial = 0; trial < 5; ++trial) {
      RealSeq b(L + 1, 0.0);
      for (int i = 1; i <= L; ++i) b[i] = -3.0 + 6.0 * rng.uniform01();
      PicardInput in;
      in.b = b;
      in.lambda = 1.0;
      in.eta = Eta::infinite();
      in.d = 2;
      in.rho = rho;
      PicardOptions po;
      po.max_internal_dt = 2e-5;
      const PicardResult pr = picard_solve(in, horizon, out_dt, po);
      const GridPath rk = integrate_limit(b, in.d, horizon, rk_dt);
      GridPath diff = pr.path;
      for (std::size_t k = 0; k < diff.grid.size(); ++k)
        for (std::size_t i = 0; i < diff.levels.size(); ++i)
          diff.levels[i][k] -= rk.levels[i][k * stride];
      worst = std::max(worst, rho_norm_path(diff, rho, horizon));
      ratios.insert(ratios.end(), pr.contraction_ratios.begin(),
                    pr.contraction_ratios.end());
    }
    return Outcome{worst < 1e-6,
                   "max ||picard - rk4||_{rho,5} = " + num(worst) +
                       " over 5 signed starts, L = 20 (tol 1e-6)"};
  });

  criterion(4, "contraction ratios", 0.0, [&ratios] {
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, r);
    return Outcome{!ratios.empty() && worst <= 0.55,
                   num(worst) + " max over " +
                       std::to_string(ratios.size()) +
                       " recorded iteration pairs (tol 0.55)"};
  });

  // 5. Single queue, d choices of the same server: geometric tail 0.6^i.
  criterion(5, "m/m/1 oracle", 30.0, [] {
    ModelParams p;
    p.n = 1;
    p.d = 2;
    p.lambda = 0.6;
    p.eta = Eta::finite(2.5);
    p.beta = (1.0 - p.lambda) * 2.5;
    SteadyOptions so;
    so.burn_in = 1000.0;
    so.sample_time = 5e4;
    so.batches = 20;
    so.levels = 5;
    const auto est = steady_state_sample(p, so, RngSpec{500, 0});
    double worst_z = 0.0;
    bool ok = true;
    for (const auto& e : est) {
      const double dev =
          std::abs(e.mean - std::pow(0.6, static_cast<double>(e.level)));
      if (dev > 3.0 * e.se) ok = false;
      if (e.se > 0.0) worst_z = std::max(worst_z, dev / e.se);
    }
    return Outcome{ok, "max |mean - 0.6^i| = " + num(worst_z) +
                           " SE across i <= 5 (tol 3 SE)"};
  });

  // 6. Tail expectations dominate the geometric-sum lower bound.
  criterion(6, "steady-state bound", 300.0, [] {
    ModelParams p;
    p.n = 200;
    p.d = 2;
    p.lambda = 0.9;
    p.eta = Eta::finite(10.0);
    p.beta = 1.0;
    SteadyOptions so;
    so.burn_in = 200.0;
    so.sample_time = 4000.0;
    so.batches = 20;
    so.levels = 8;
    const auto est = steady_state_sample(p, so, RngSpec{600, 0});
    const auto checks = verify_bound(p, est);
    bool ok = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& c : checks) {
      if (c.level < 1) continue;
      ok = ok && c.pass;
      min_margin = std::min(min_margin, c.margin);
    }
    return Outcome{ok, "levels 1..8 mean >= bound - 3 SE, min margin = " +
                           num(min_margin)};
  });

  // 7. Doubly-exponential tail at level round(alpha log_d n) + k matches
  // the exp(-beta d^k/(d-1)) reference within the rounding wobble.
  criterion(7, "figure-1 reproduction", 0.0, [] {
    Figure1Settings s;
    s.seed = 7;
    s.workers = resolve_workers(0);
    const auto rows = figure1_experiment(s);
    double worst = 0.0;
    std::string at;
    for (const auto& r : rows) {
      const double dev = std::abs(r.mean - r.heuristic);
      if (dev > worst) {
        worst = dev;
        at = "n = " + std::to_string(r.n) + ", k = " + std::to_string(r.k);
      }
    }
    return Outcome{!rows.empty() && worst <= 0.08,
                   "max |mean - exp(-2 2^k)| = " + num(worst) + " at " + at +
                       " (tol 0.08)"};
  });

  // 8 + 9. One ladder run feeds both the discrepancy and the martingale
  // norms; both must shrink strictly with n.
  ConvergeReport conv;
  criterion(8, "transient convergence", 0.0, [&conv] {
    ConvergeSettings s;
    s.seed = 11;
    s.workers = resolve_workers(0);
    conv = converge_experiment(s);
    bool ok = conv.rows.size() >= 2;
    std::string list;
    for (std::size_t r = 0; r < conv.rows.size(); ++r) {
      if (r > 0 && !(conv.rows[r].e_n < conv.rows[r - 1].e_n)) ok = false;
      if (r > 0) list += " > ";
      list += num(conv.rows[r].e_n);
    }
    return Outcome{ok, "e_n strictly decreasing along n in {1e3,1e4,1e5}: " +
                           list};
  });

  criterion(9, "martingale vanishing", 0.0, [&conv] {
    if (conv.rows.size() < 2) return Outcome{false, "no ladder data"};
    bool ok = true;
    std::string m_list, n_list;
    for (std::size_t r = 0; r < conv.rows.size(); ++r) {
      if (r > 0) {
        ok = ok && conv.rows[r].m_norm_mean < conv.rows[r - 1].m_norm_mean;
        ok = ok && conv.rows[r].n_norm_mean < conv.rows[r - 1].n_norm_mean;
        m_list += " > ";
        n_list += " > ";
      }
      m_list += num(conv.rows[r].m_norm_mean);
      n_list += num(conv.rows[r].n_norm_mean);
    }
    return Outcome{ok, "mean ||M||: " + m_list + "; mean ||N||: " + n_list};
  });

  // 10. Sample mean of the path norm sits under the a-priori growth bound.
  criterion(10, "expectation growth", 0.0, [] {
    GrowthSettings s;
    s.seed = 21;
    const auto g = growth_experiment(s);
    return Outcome{g.holds, "mean ||T||_{rho,2} = " + num(g.mean_norm) +
                                " <= " + num(g.bound) +
                                " (rho = " + num(g.rho) + ", 50 reps)"};
  });

  // 11. Same config + seed => byte-identical CSVs, independent of workers.
  criterion(11, "determinism", 0.0, [] {
    const char* cli = std::getenv("SUPERMARKET_CLI");
    if (cli == nullptr) return Outcome{false, "SUPERMARKET_CLI not set"};
    const fs::path dir = fs::temp_directory_path() / "supermarket_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "sim.ini");
      f << "[model]\nn = 400\nlambda = 0.95\neta = 10\n"
        << "[simulate]\nhorizon = 2\ndt = 0.1\nlevels = 6\n"
        << "record_events = true\n";
    }
    {
      std::ofstream f(dir / "conv.ini");
      f << "[converge]\nladder = 300, 600\nreplications = 3\nhorizon = 0.5\n"
        << "dt = 0.1\ni0 = 2\node_levels = 10\n";
    }
    const std::string q = std::string("\"") + cli + "\"";
    const std::string base = " >/dev/null 2>&1";
    const std::string simcfg = (dir / "sim.ini").string();
    const std::string convcfg = (dir / "conv.ini").string();
    for (const char* sub : {"a", "b"}) {
      if (!run_cli(q + " simulate --config " + simcfg + " --seed 123 --out " +
                   (dir / ("sim_" + std::string(sub))).string() + base))
        return Outcome{false, "simulate run failed"};
    }
    if (!run_cli(q + " converge --config " + convcfg +
                 " --seed 5 --workers 1 --out " + (dir / "conv_a").string() +
                 base) ||
        !run_cli(q + " converge --config " + convcfg +
                 " --seed 5 --workers 2 --out " + (dir / "conv_b").string() +
                 base))
      return Outcome{false, "converge run failed"};
    bool ok = true;
    for (const char* f : {"path.csv", "events.csv"})
      ok = ok && slurp(dir / "sim_a" / f) == slurp(dir / "sim_b" / f) &&
           !slurp(dir / "sim_a" / f).empty();
    ok = ok && slurp(dir / "conv_a" / "convergence.csv") ==
                   slurp(dir / "conv_b" / "convergence.csv") &&
         !slurp(dir / "conv_a" / "convergence.csv").empty();
    fs::remove_all(dir);
    return Outcome{ok, ok ? "rerun and workers 1 vs 2 byte-identical"
                          : "CSV bytes differ"};
  });

  std::printf("acceptance: %d/11 criteria pass\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
