#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "supermarket/experiments.hpp"
#include "supermarket/initial_profile.hpp"

using namespace supermarket;

namespace {

ConvergeSettings small_settings() {
  ConvergeSettings s;
  s.ladder = {200, 400};
  s.replications = 3;
  s.horizon = 0.5;
  s.grid_dt = 0.05;
  s.i0 = 2;
  s.ode_levels = 12;
  s.seed = 17;
  return s;
}

}  // namespace

TEST_CASE("degenerate ladder: one rung, one replication") {
  ConvergeSettings s;
  s.ladder = {500};
  s.replications = 1;
  s.horizon = 1.0;
  s.grid_dt = 0.05;
  s.i0 = 3;
  s.ode_levels = 12;

  auto rep = converge_experiment(s);
  REQUIRE(rep.rows.size() == 1);
  const auto& row = rep.rows[0];
  CHECK(row.n == 500);
  CHECK(row.eta == doctest::Approx(std::sqrt(500.0)));
  CHECK(row.replications == 1);
  CHECK(std::isfinite(row.e_n));
  CHECK(row.e_n >= 0.0);
  CHECK(row.e_se == 0.0);  // a single replication carries no spread estimate
  CHECK(row.m_norm_mean > 0.0);
  CHECK(row.n_norm_mean > 0.0);

  CHECK(rep.limit.levels.size() == 4);
  CHECK(rep.limit.grid.size() == 21);
  CHECK(rep.limit.levels[0].back() == 0.0);
}

TEST_CASE("parallel and serial ladders agree bit for bit") {
  ConvergeSettings s = small_settings();
  auto serial = converge_experiment(s);
  s.workers = 3;
  auto parallel = converge_experiment(s);

  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t r = 0; r < serial.rows.size(); ++r) {
    CHECK(serial.rows[r].e_n == parallel.rows[r].e_n);
    CHECK(serial.rows[r].e_se == parallel.rows[r].e_se);
    CHECK(serial.rows[r].argmax_level == parallel.rows[r].argmax_level);
    CHECK(serial.rows[r].m_norm_mean == parallel.rows[r].m_norm_mean);
    CHECK(serial.rows[r].n_norm_mean == parallel.rows[r].n_norm_mean);
  }

  // Same settings, same seed: reruns reproduce themselves.
  s.workers = 1;
  auto rerun = converge_experiment(s);
  CHECK(rerun.rows[1].e_n == serial.rows[1].e_n);
}

TEST_CASE("settings validation") {
  ConvergeSettings s = small_settings();
  s.ladder = {};
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);
  s.ladder = {400, 200};
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);
  s.ladder = {200, 200};
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);

  s = small_settings();
  s.i0 = 0;
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);
  s = small_settings();
  s.ode_levels = 2;
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);
  s = small_settings();
  s.ladder = {4};  // eta = 2 <= beta
  CHECK_THROWS_AS(converge_experiment(s), std::invalid_argument);
}

TEST_CASE("profiles outside the stopped region are rejected") {
  ConvergeSettings s;
  s.ladder = {100};
  s.replications = 1;
  s.horizon = 0.5;
  s.grid_dt = 0.05;
  s.i0 = 2;
  s.ode_levels = 10;
  s.c = 2.0;    // T_1(0) = 4
  s.rho = 1.1;  // drives i_star above 1 so the region constraint bites
  CHECK_THROWS_WITH_AS(converge_experiment(s),
                       "starting profile leaves the stopped region at level 1",
                       std::invalid_argument);
}

TEST_CASE("truncation depth and step size do not move the reported levels") {
  RealSeq shallow_init = geometric_profile_limit(2, Eta::infinite(), 0.5, 30);
  RealSeq deep_init = geometric_profile_limit(2, Eta::infinite(), 0.5, 45);
  IntegrateOptions io;
  GridPath shallow = integrate_limit(shallow_init, 2, 5.0, 0.02, io);
  GridPath deep = integrate_limit(deep_init, 2, 5.0, 0.01, io);

  double worst = 0.0;
  for (std::size_t i = 0; i <= 5; ++i)
    for (std::size_t k = 0; k < shallow.grid.size(); ++k)
      worst = std::max(worst,
                       std::abs(shallow.levels[i][k] - deep.levels[i][2 * k]));
  CHECK(worst < 1e-6);
}

TEST_CASE("growth check: the sample mean sits under the exponential envelope") {
  GrowthSettings s;
  s.n = 400;
  s.replications = 5;
  s.t = 2.0;
  s.grid_dt = 0.1;
  s.levels = 8;
  s.seed = 9;

  auto rep = growth_experiment(s);
  CHECK(rep.rho == 3.0);

  // The apportioned profile at n=400, eta=20, c=1/2 is exact: T(0) =
  // {0,1,2,4,8,16,20,20,20}.
  double manual = 1.0 / 3 + 2.0 / 9 + 4.0 / 27 + 8.0 / 81 + 16.0 / 243 +
                  20.0 / 729 + 20.0 / 2187 + 20.0 / 6561;
  CHECK(rep.init_norm == doctest::Approx(manual).epsilon(1e-12));

  CHECK(rep.mean_norm > 0.0);
  CHECK(rep.se >= 0.0);
  CHECK(rep.bound == doctest::Approx(rep.init_norm * std::exp(6.0) + 3 * rep.se));
  CHECK(rep.holds);

  s.replications = 1;
  CHECK_THROWS_AS(growth_experiment(s), std::invalid_argument);
}
