#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "supermarket/config.hpp"
#include "supermarket/csv.hpp"
#include "supermarket/ensemble.hpp"
#include "supermarket/experiments.hpp"
#include "supermarket/fixed_point.hpp"
#include "supermarket/initial_profile.hpp"
#include "supermarket/limit_ode.hpp"
#include "supermarket/simulator.hpp"
#include "supermarket/steady_state.hpp"

using namespace supermarket;

namespace {

// Command-line values; presence is tracked through the CLI11 option objects
// so a flag can override the config file, which overrides the defaults.
struct Cli {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::int64_t levels = 0;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* levels_opt = nullptr;

  double real(const CLI::Option* opt, double flag_value, const Config& cfg,
              const std::string& key, double fallback) const {
    if (opt->count() > 0) return flag_value;
    return cfg.get_real(key, fallback);
  }
  std::int64_t integer(const CLI::Option* opt, std::int64_t flag_value,
                       const Config& cfg, const std::string& key,
                       std::int64_t fallback) const {
    if (opt->count() > 0) return flag_value;
    return cfg.get_int(key, fallback);
  }
  std::uint64_t resolve_seed(const Config& cfg) const {
    if (seed_opt->count() > 0) return seed;
    return cfg.get_u64("run.seed", 1);
  }
  int resolve_worker_count(const Config& cfg) const {
    auto requested = static_cast<int>(
        integer(workers_opt, workers, cfg, "run.workers", 0));
    return resolve_workers(requested);  // SUPERMARKET_WORKERS wins
  }
  std::filesystem::path out_path(const std::string& file) const {
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / file;
  }
};

StepScheme parse_scheme(const std::string& name) {
  if (name == "min_of_draws" || name == "min") return StepScheme::MinOfDraws;
  if (name == "rate_vector" || name == "rates") return StepScheme::RateVector;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (want min_of_draws or rate_vector)");
}

Closure parse_closure(const std::string& name) {
  if (name == "zero") return Closure::Zero;
  if (name == "geometric") return Closure::Geometric;
  if (name == "frozen") return Closure::Frozen;
  throw std::invalid_argument("unknown closure '" + name +
                              "' (want zero, geometric or frozen)");
}

void stamp(CsvWriter& w, const std::string& command, const Config& resolved,
           std::uint64_t seed) {
  w.comment("supermarket " + command);
  w.comment("config: " + resolved.canonical());
  w.comment("seed: " + std::to_string(seed));
}

void write_path_csv(const std::string& file, const std::string& command,
                    const Config& resolved, std::uint64_t seed,
                    const GridPath& path) {
  CsvWriter w(file);
  stamp(w, command, resolved, seed);
  std::vector<std::string> cols{"t"};
  for (std::size_t i = 0; i < path.levels.size(); ++i)
    cols.push_back("T_" + std::to_string(i));
  w.columns(cols);
  std::vector<CsvCell> cells;
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    cells.clear();
    cells.emplace_back(path.grid[k]);
    for (const auto& level : path.levels) cells.emplace_back(level[k]);
    w.row(cells);
  }
  w.close();
}

int cmd_simulate(const Cli& cli, const Config& cfg) {
  std::int64_t n = cfg.get_int("model.n");
  int d = static_cast<int>(cfg.get_int("model.d", 2));
  double eta = cfg.get_real("model.eta", std::sqrt(static_cast<double>(n)));
  double beta = cfg.get_real("model.beta", 2.0);
  double lambda = cfg.get_real("model.lambda", 1.0 - beta / eta);

  ModelParams p;
  p.n = n;
  p.d = d;
  p.lambda = lambda;
  p.beta = beta;
  p.eta = Eta::finite(eta);
  p.alpha = cfg.get_real("model.alpha", 0.4);
  p.rho = cfg.get_real("model.rho", 2.0);
  p.istar_scale = cfg.get_real("model.istar_scale", 0.5);
  p.validate();

  SimulateOptions so;
  so.horizon = cli.real(cli.horizon_opt, cli.horizon, cfg, "simulate.horizon", 5.0);
  so.grid_dt = cli.real(cli.dt_opt, cli.dt, cfg, "simulate.dt", 0.1);
  so.levels = static_cast<std::size_t>(
      cli.integer(cli.levels_opt, cli.levels, cfg, "simulate.levels", 8));
  so.record_events = cfg.get_bool("simulate.record_events", false);
  so.scheme = parse_scheme(cfg.get_string("simulate.scheme", "min_of_draws"));

  std::uint64_t seed = cli.resolve_seed(cfg);
  std::uint64_t stream = cfg.get_u64("run.stream", 0);

  std::string init_kind = cfg.get_string("simulate.init", "empty");
  double profile_c = cfg.get_real("simulate.profile_c", 0.5);
  TailCounts init = [&] {
    if (init_kind == "empty") return TailCounts(n);
    if (init_kind == "profile") return geometric_profile_state(n, d, eta, profile_c);
    throw std::invalid_argument("simulate.init must be 'empty' or 'profile'");
  }();

  auto res = simulate_path(init, p, so, RngSpec{seed, stream});

  Config resolved;
  resolved.set("model.n", std::to_string(n));
  resolved.set("model.d", std::to_string(d));
  resolved.set("model.eta", format_real(eta));
  resolved.set("model.beta", format_real(beta));
  resolved.set("model.lambda", format_real(lambda));
  resolved.set("model.alpha", format_real(p.alpha));
  resolved.set("model.rho", format_real(p.rho));
  resolved.set("model.istar_scale", format_real(p.istar_scale));
  resolved.set("simulate.horizon", format_real(so.horizon));
  resolved.set("simulate.dt", format_real(so.grid_dt));
  resolved.set("simulate.levels", std::to_string(so.levels));
  resolved.set("simulate.record_events", so.record_events ? "true" : "false");
  resolved.set("simulate.scheme",
               so.scheme == StepScheme::MinOfDraws ? "min_of_draws" : "rate_vector");
  resolved.set("simulate.init", init_kind);
  if (init_kind == "profile") resolved.set("simulate.profile_c", format_real(profile_c));
  resolved.set("run.stream", std::to_string(stream));

  write_path_csv(cli.out_path("path.csv").string(), "simulate", resolved, seed,
                 res.scaled);
  if (so.record_events) {
    CsvWriter w(cli.out_path("events.csv").string());
    stamp(w, "simulate", resolved, seed);
    w.columns({"time", "level", "type"});
    for (const Event& e : res.events)
      w.row({e.time, static_cast<std::int64_t>(e.level),
             std::string(e.type == EventType::Arrival ? "A" : "D")});
    w.close();
  }
  std::cout << "simulate: " << res.event_count << " events, wrote path.csv"
            << (so.record_events ? " and events.csv" : "") << '\n';
  return 0;
}

int cmd_limit(const Cli& cli, const Config& cfg) {
  int d = static_cast<int>(cfg.get_int("model.d", 2));
  auto L = static_cast<int>(cli.integer(cli.levels_opt, cli.levels, cfg,
                                        "limit.levels", 20));
  double horizon = cli.real(cli.horizon_opt, cli.horizon, cfg, "limit.horizon", 5.0);
  double dt = cli.real(cli.dt_opt, cli.dt, cfg, "limit.dt", 0.01);

  IntegrateOptions io;
  std::string closure_name = cfg.get_string("limit.closure", "geometric");
  io.closure = parse_closure(closure_name);
  io.divergence_limit = cfg.get_real("limit.divergence_limit", io.divergence_limit);
  io.divergence_rho = cfg.get_real("limit.divergence_rho", io.divergence_rho);

  std::string init_kind = cfg.get_string("limit.init", "profile");
  RealSeq init;
  if (init_kind == "profile") {
    init = geometric_profile_limit(d, Eta::infinite(),
                                   cfg.get_real("limit.c", 0.5), L);
  } else if (init_kind == "fixed_point") {
    init = fixed_point(d, cfg.get_real("limit.pi1", 2.0), L);
  } else if (init_kind == "values") {
    init = cfg.get_real_list("limit.values");
    if (static_cast<int>(init.size()) != L + 1)
      throw std::invalid_argument("limit.values must list levels 0..levels");
  } else {
    throw std::invalid_argument(
        "limit.init must be 'profile', 'fixed_point' or 'values'");
  }

  GridPath path = integrate_limit(init, d, horizon, dt, io);

  Config resolved;
  resolved.set("model.d", std::to_string(d));
  resolved.set("limit.levels", std::to_string(L));
  resolved.set("limit.horizon", format_real(horizon));
  resolved.set("limit.dt", format_real(dt));
  resolved.set("limit.closure", closure_name);
  resolved.set("limit.init", init_kind);
  resolved.set("limit.divergence_limit", format_real(io.divergence_limit));
  resolved.set("limit.divergence_rho", format_real(io.divergence_rho));

  write_path_csv(cli.out_path("limit.csv").string(), "limit", resolved,
                 cli.resolve_seed(cfg), path);
  std::cout << "limit: wrote limit.csv\n";
  return 0;
}

int cmd_converge(const Cli& cli, const Config& cfg) {
  ConvergeSettings s;
  s.ladder = cfg.get_int_list("converge.ladder", s.ladder);
  s.d = static_cast<int>(cfg.get_int("converge.d", s.d));
  s.beta = cfg.get_real("converge.beta", s.beta);
  s.c = cfg.get_real("converge.c", s.c);
  s.replications = static_cast<int>(cfg.get_int("converge.replications", s.replications));
  s.horizon = cli.real(cli.horizon_opt, cli.horizon, cfg, "converge.horizon", s.horizon);
  s.grid_dt = cli.real(cli.dt_opt, cli.dt, cfg, "converge.dt", s.grid_dt);
  s.i0 = static_cast<int>(cli.integer(cli.levels_opt, cli.levels, cfg, "converge.i0", s.i0));
  s.ode_levels = static_cast<int>(cfg.get_int("converge.ode_levels", s.ode_levels));
  s.rho = cfg.get_real("converge.rho", s.rho);
  s.alpha = cfg.get_real("converge.alpha", s.alpha);
  s.scheme = parse_scheme(cfg.get_string("converge.scheme", "min_of_draws"));
  s.seed = cli.resolve_seed(cfg);
  s.workers = cli.resolve_worker_count(cfg);

  auto report = converge_experiment(s);

  Config resolved;
  std::string ladder;
  for (std::size_t i = 0; i < s.ladder.size(); ++i)
    ladder += (i ? "," : "") + std::to_string(s.ladder[i]);
  resolved.set("converge.ladder", ladder);
  resolved.set("converge.d", std::to_string(s.d));
  resolved.set("converge.beta", format_real(s.beta));
  resolved.set("converge.c", format_real(s.c));
  resolved.set("converge.replications", std::to_string(s.replications));
  resolved.set("converge.horizon", format_real(s.horizon));
  resolved.set("converge.dt", format_real(s.grid_dt));
  resolved.set("converge.i0", std::to_string(s.i0));
  resolved.set("converge.ode_levels", std::to_string(s.ode_levels));
  resolved.set("converge.rho", format_real(s.rho));
  resolved.set("converge.alpha", format_real(s.alpha));
  resolved.set("converge.scheme",
               s.scheme == StepScheme::MinOfDraws ? "min_of_draws" : "rate_vector");

  CsvWriter w(cli.out_path("convergence.csv").string());
  stamp(w, "converge", resolved, s.seed);
  w.columns({"n", "eta", "R", "e_n", "e_se", "argmax_level", "argmax_t",
             "m_norm_mean", "m_norm_se", "n_norm_mean", "n_norm_se"});
  for (const auto& row : report.rows)
    w.row({row.n, row.eta, static_cast<std::int64_t>(row.replications), row.e_n,
           row.e_se, static_cast<std::int64_t>(row.argmax_level), row.argmax_t,
           row.m_norm_mean, row.m_norm_se, row.n_norm_mean, row.n_norm_se});
  w.close();
  std::cout << "converge: wrote convergence.csv (" << report.rows.size()
            << " rungs)\n";
  return 0;
}

// Both steady subcommands emit the same tidy schema; for verify-bound the
// heavy-traffic columns are the realized values beta = (1-lambda) eta,
// alpha = log eta / log n, and k = level - round(log_d eta).
const std::vector<std::string> kSteadyCols{"n",    "d",      "beta",  "alpha",
                                           "level", "k",     "mean",  "stderr",
                                           "bound", "heuristic", "pass"};

int cmd_steady_verify(const Cli& cli, const Config& cfg) {
  std::int64_t n = cfg.get_int("steady.n");
  int d = static_cast<int>(cfg.get_int("steady.d", 2));
  double lambda = cfg.get_real("steady.lambda");
  double eta = cfg.get_real("steady.eta", 1.0 / (1.0 - lambda));

  ModelParams p;
  p.n = n;
  p.d = d;
  p.lambda = lambda;
  p.beta = (1.0 - lambda) * eta;
  p.eta = Eta::finite(eta);
  p.validate();

  SteadyOptions so;
  so.levels = static_cast<std::size_t>(
      cli.integer(cli.levels_opt, cli.levels, cfg, "steady.levels", 8));
  so.burn_in = cfg.get_real("steady.burn_in", 10.0 * eta);
  so.sample_time = cfg.get_real("steady.sample_time", 50.0 * eta);
  so.batches = static_cast<int>(cfg.get_int("steady.batches", 20));
  so.scheme = parse_scheme(cfg.get_string("steady.scheme", "min_of_draws"));

  std::uint64_t seed = cli.resolve_seed(cfg);
  std::uint64_t stream = cfg.get_u64("run.stream", 0);
  auto est = steady_state_sample(p, so, RngSpec{seed, stream});
  auto checks = verify_bound(p, est);

  Config resolved;
  resolved.set("steady.n", std::to_string(n));
  resolved.set("steady.d", std::to_string(d));
  resolved.set("steady.lambda", format_real(lambda));
  resolved.set("steady.eta", format_real(eta));
  resolved.set("steady.levels", std::to_string(so.levels));
  resolved.set("steady.burn_in", format_real(so.burn_in));
  resolved.set("steady.sample_time", format_real(so.sample_time));
  resolved.set("steady.batches", std::to_string(so.batches));
  resolved.set("steady.scheme",
               so.scheme == StepScheme::MinOfDraws ? "min_of_draws" : "rate_vector");
  resolved.set("run.stream", std::to_string(stream));

  double alpha_col = n > 1 ? std::log(eta) / std::log(static_cast<double>(n)) : 0.0;
  auto base = static_cast<std::int64_t>(
      std::lround(std::log(eta) / std::log(static_cast<double>(d))));

  CsvWriter w(cli.out_path("steady.csv").string());
  stamp(w, "steady verify-bound", resolved, seed);
  w.columns(kSteadyCols);
  std::size_t passing = 0;
  for (const auto& c : checks) {
    auto k = static_cast<std::int64_t>(c.level) - base;
    w.row({n, static_cast<std::int64_t>(d), p.beta, alpha_col,
           static_cast<std::int64_t>(c.level), k, c.mean, c.se, c.bound,
           heuristic_limit(p.beta, d, static_cast<int>(k)),
           static_cast<std::int64_t>(c.pass ? 1 : 0)});
    passing += c.pass ? 1 : 0;
  }
  w.close();
  std::cout << "steady verify-bound: " << passing << "/" << checks.size()
            << " levels pass, wrote steady.csv\n";
  return 0;
}

int cmd_steady_figure1(const Cli& cli, const Config& cfg) {
  Figure1Settings s;
  s.beta = cfg.get_real("figure1.beta", s.beta);
  s.alpha_exp = cfg.get_real("figure1.alpha", s.alpha_exp);
  s.d = static_cast<int>(cfg.get_int("figure1.d", s.d));
  s.n_list = cfg.get_int_list("figure1.n_list", s.n_list);
  auto ks = cfg.get_int_list("figure1.k_list", {0, 1});
  s.k_list.assign(ks.begin(), ks.end());
  s.chains = static_cast<int>(cfg.get_int("figure1.chains", s.chains));
  s.batches = static_cast<int>(cfg.get_int("figure1.batches", s.batches));
  s.burn_factor = cfg.get_real("figure1.burn_factor", s.burn_factor);
  s.sample_factor = cfg.get_real("figure1.sample_factor", s.sample_factor);
  s.scheme = parse_scheme(cfg.get_string("figure1.scheme", "min_of_draws"));
  s.seed = cli.resolve_seed(cfg);
  s.workers = cli.resolve_worker_count(cfg);

  auto rows = figure1_experiment(s);

  Config resolved;
  auto join = [](const auto& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
      out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
  };
  resolved.set("figure1.beta", format_real(s.beta));
  resolved.set("figure1.alpha", format_real(s.alpha_exp));
  resolved.set("figure1.d", std::to_string(s.d));
  resolved.set("figure1.n_list", join(s.n_list));
  resolved.set("figure1.k_list", join(s.k_list));
  resolved.set("figure1.chains", std::to_string(s.chains));
  resolved.set("figure1.batches", std::to_string(s.batches));
  resolved.set("figure1.burn_factor", format_real(s.burn_factor));
  resolved.set("figure1.sample_factor", format_real(s.sample_factor));
  resolved.set("figure1.scheme",
               s.scheme == StepScheme::MinOfDraws ? "min_of_draws" : "rate_vector");

  CsvWriter w(cli.out_path("figure1.csv").string());
  stamp(w, "steady figure1", resolved, s.seed);
  w.columns(kSteadyCols);
  for (const auto& r : rows)
    w.row({r.n, static_cast<std::int64_t>(r.d), r.beta, r.alpha,
           static_cast<std::int64_t>(r.level), static_cast<std::int64_t>(r.k),
           r.mean, r.se, r.bound, r.heuristic,
           static_cast<std::int64_t>(r.pass ? 1 : 0)});
  w.close();
  std::cout << "steady figure1: wrote figure1.csv (" << rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-of-d-choices queue simulator and heavy-traffic toolkit"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--config", cli.config_path, "key-value config file");
  app.add_option("--out", cli.out_dir, "output directory (default .)");
  cli.seed_opt = app.add_option("--seed", cli.seed, "base RNG seed");
  cli.workers_opt =
      app.add_option("--workers", cli.workers, "parallel worker count");
  cli.dt_opt = app.add_option("--dt", cli.dt, "grid step override");
  cli.horizon_opt = app.add_option("--horizon", cli.horizon, "horizon override");
  cli.levels_opt =
      app.add_option("--levels", cli.levels,
                     "levels override (recorded levels, or i0 for converge)");

  auto* sim = app.add_subcommand("simulate", "sample one rescaled trajectory");
  auto* lim = app.add_subcommand("limit", "integrate the limiting system");
  auto* conv =
      app.add_subcommand("converge", "replication ladder against the limit");
  auto* steady = app.add_subcommand("steady", "steady-state estimation");
  steady->require_subcommand(1);
  auto* verify =
      steady->add_subcommand("verify-bound", "check the expectation lower bound");
  auto* figure =
      steady->add_subcommand("figure1", "steady-state sweep across n");
  for (auto* c : {sim, lim, conv, steady, verify, figure}) c->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = cli.config_path.empty() ? Config{}
                                         : Config::from_file(cli.config_path);
    if (*sim) return cmd_simulate(cli, cfg);
    if (*lim) return cmd_limit(cli, cfg);
    if (*conv) return cmd_converge(cli, cfg);
    if (*verify) return cmd_steady_verify(cli, cfg);
    if (*figure) return cmd_steady_figure1(cli, cfg);
  } catch (const SolverFault& e) {
    std::cerr << "solver fault: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
