// End-to-end checks of the command-line binary, located through the
// SUPERMARKET_CLI environment variable (set by the build).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SUPERMARKET_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SUPERMARKET_CLI must point at the binary");
  return p;
}

int run(const std::string& args) {
  std::string cmd = "\"" + cli_path() + "\" " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "supermarket_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
  REQUIRE(out.good());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Data rows only: everything after the header row, split by commas.
std::vector<std::vector<std::string>> data_rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate: lambda = 0 gives a constant path at eta") {
  fs::path dir = scratch() / "lambda0";
  fs::create_directories(dir);
  write_file(dir / "c.ini",
             "[model]\nn = 40\nd = 2\nlambda = 0\neta = 4\n"
             "[simulate]\nhorizon = 1\ndt = 0.25\nlevels = 3\n");
  REQUIRE(run("simulate --config " + (dir / "c.ini").string() + " --out " +
              dir.string()) == 0);

  auto rows = data_rows(dir / "path.csv");
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 5);
    CHECK(r[1] == "0");
    CHECK(r[2] == "4");
    CHECK(r[3] == "4");
    CHECK(r[4] == "4");
  }

  std::string text = slurp(dir / "path.csv");
  CHECK(text.find("# supermarket simulate") != std::string::npos);
  CHECK(text.find("# config: ") != std::string::npos);
  CHECK(text.find("# seed: ") != std::string::npos);
}

TEST_CASE("simulate: same seed reruns are byte-identical, new seed differs") {
  fs::path dir = scratch() / "determinism";
  fs::create_directories(dir);
  write_file(dir / "c.ini",
             "[model]\nn = 300\nlambda = 0.9\neta = 10\n"
             "[simulate]\nhorizon = 2\ndt = 0.1\nrecord_events = true\n");
  std::string base = "simulate --config " + (dir / "c.ini").string();

  REQUIRE(run(base + " --seed 11 --out " + (dir / "a").string()) == 0);
  REQUIRE(run(base + " --seed 11 --out " + (dir / "b").string()) == 0);
  REQUIRE(run(base + " --seed 12 --out " + (dir / "c").string()) == 0);

  CHECK(slurp(dir / "a/path.csv") == slurp(dir / "b/path.csv"));
  CHECK(slurp(dir / "a/events.csv") == slurp(dir / "b/events.csv"));
  CHECK(slurp(dir / "a/path.csv") != slurp(dir / "c/path.csv"));
}

TEST_CASE("limit: fixed-point initial data stays constant") {
  fs::path dir = scratch() / "fixedpoint";
  fs::create_directories(dir);
  write_file(dir / "c.ini",
             "[limit]\ninit = fixed_point\npi1 = 2\nlevels = 6\n"
             "horizon = 1\ndt = 0.25\n");
  REQUIRE(run("limit --config " + (dir / "c.ini").string() + " --out " +
              dir.string()) == 0);

  auto rows = data_rows(dir / "limit.csv");
  REQUIRE(rows.size() == 5);
  for (std::size_t c = 1; c < rows[0].size(); ++c)
    for (const auto& r : rows) CHECK(r[c] == rows[0][c]);
  CHECK(rows[0][2] == "2");   // pi_1
  CHECK(rows[0][3] == "6");   // pi_2 = 3 pi_1 - 2 pi_0
}

TEST_CASE("workers do not change converge output bytes") {
  fs::path dir = scratch() / "workers";
  fs::create_directories(dir);
  write_file(dir / "c.ini",
             "[converge]\nladder = 200,400\nreplications = 2\nhorizon = 0.5\n"
             "dt = 0.1\ni0 = 2\node_levels = 10\n");
  std::string base = "converge --config " + (dir / "c.ini").string() + " --seed 4";

  REQUIRE(run(base + " --workers 1 --out " + (dir / "w1").string()) == 0);
  REQUIRE(run(base + " --workers 3 --out " + (dir / "w3").string()) == 0);
  CHECK(slurp(dir / "w1/convergence.csv") == slurp(dir / "w3/convergence.csv"));

  // The environment variable takes precedence over the flag.
  setenv("SUPERMARKET_WORKERS", "2", 1);
  REQUIRE(run(base + " --workers 1 --out " + (dir / "env").string()) == 0);
  CHECK(slurp(dir / "env/convergence.csv") == slurp(dir / "w1/convergence.csv"));
  setenv("SUPERMARKET_WORKERS", "junk", 1);
  CHECK(run(base + " --out " + (dir / "envbad").string()) == 1);
  unsetenv("SUPERMARKET_WORKERS");
}

TEST_CASE("steady verify-bound: small system, all levels pass") {
  fs::path dir = scratch() / "steady";
  fs::create_directories(dir);
  write_file(dir / "c.ini",
             "[steady]\nn = 50\nlambda = 0.8\nlevels = 4\nburn_in = 20\n"
             "sample_time = 150\n");
  REQUIRE(run("steady verify-bound --config " + (dir / "c.ini").string() +
              " --seed 8 --out " + dir.string()) == 0);

  auto rows = data_rows(dir / "steady.csv");
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 11);
    CHECK(r[0] == "50");
    CHECK(r.back() == "1");
  }
  // Level 0 is exact: mean 1, stderr 0, bound 1.
  CHECK(rows[0][6] == "1");
  CHECK(rows[0][7] == "0");
  CHECK(rows[0][8] == "1");
}

TEST_CASE("steady figure1: empty level range gives a header-only table") {
  fs::path dir = scratch() / "fig_empty";
  fs::create_directories(dir);
  write_file(dir / "c.ini", "[figure1]\nn_list = 64\nk_list =\n");
  REQUIRE(run("steady figure1 --config " + (dir / "c.ini").string() +
              " --out " + dir.string()) == 0);
  CHECK(data_rows(dir / "figure1.csv").empty());
  CHECK(slurp(dir / "figure1.csv").find("n,d,beta,alpha,level,k,mean,stderr,"
                                        "bound,heuristic,pass") !=
        std::string::npos);
}

TEST_CASE("exit codes: 1 for invalid configuration, 2 for solver faults") {
  fs::path dir = scratch() / "codes";
  fs::create_directories(dir);

  CHECK(run("simulate --config " + (dir / "missing.ini").string()) == 1);

  write_file(dir / "bad.ini", "what is this\n");
  CHECK(run("simulate --config " + (dir / "bad.ini").string()) == 1);

  write_file(dir / "nokey.ini", "[model]\nd = 2\n");  // n missing
  CHECK(run("simulate --config " + (dir / "nokey.ini").string()) == 1);

  write_file(dir / "diverge.ini",
             "[limit]\ninit = values\nvalues = 0,4000000,8000000\nlevels = 2\n"
             "horizon = 1\ndt = 0.5\n");
  CHECK(run("limit --config " + (dir / "diverge.ini").string() + " --out " +
            (dir / "d").string()) == 2);

  CHECK(run("--help") == 0);
  CHECK(run("") != 0);
}
