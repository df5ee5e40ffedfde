// Serial vs OpenMP replication ensembles on the simulation kernel. The two
// schedulers must produce identical numbers (tasks own disjoint slots and
// streams), so the only thing measured here is dispatch overhead and scaling.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "supermarket/ensemble.hpp"
#include "supermarket/initial_profile.hpp"
#include "supermarket/params.hpp"
#include "supermarket/simulator.hpp"

namespace {

using namespace supermarket;

struct Workload {
  ModelParams p;
  TailCounts init;
  SimulateOptions opts;
};

Workload make_workload() {
  const std::int64_t n = 2000;
  const double eta = std::sqrt(static_cast<double>(n));
  Workload w{heavy_traffic_params(n, 2, 2.0, Eta::finite(eta)),
             geometric_profile_state(n, 2, eta, 0.5),
             {}};
  w.opts.horizon = 1.0;
  w.opts.grid_dt = 0.1;
  w.opts.levels = 6;
  return w;
}

double run_one(const Workload& w, std::size_t task) {
  const SimulateResult res =
      simulate_path(w.init, w.p, w.opts, RngSpec{99, task});
  return res.scaled.levels[1].back();
}

void bm_ensemble_serial(benchmark::State& state) {
  const Workload w = make_workload();
  const auto reps = static_cast<std::size_t>(state.range(0));
  std::vector<double> out(reps);
  for (auto _ : state) {
    run_tasks_serial(reps, [&](std::size_t t) { out[t] = run_one(w, t); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reps));
}

void bm_ensemble_parallel(benchmark::State& state) {
  const Workload w = make_workload();
  const auto reps = static_cast<std::size_t>(state.range(0));
  const int workers = resolve_workers(0);
  std::vector<double> out(reps);
  for (auto _ : state) {
    run_tasks_parallel(reps, workers,
                       [&](std::size_t t) { out[t] = run_one(w, t); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reps));
  state.counters["workers"] = workers;
}

}  // namespace

BENCHMARK(bm_ensemble_serial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_ensemble_parallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
