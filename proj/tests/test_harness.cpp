#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nsf/harness.hpp"
#include "nsf/snapshot.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

const char* equilibrium_text = R"(grid:
  dim: 2
  counts: [16, 16]
data:
  rho0: "1"
  theta0: "1"
  u0: ["0", "0"]
  theta_B: "1"
  u_B: ["0", "0"]
  q_B: "0"
stepper:
  dt: 1e-3
  t_end: 0.02
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nsf_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(exit_code(ExitCause::completed) == 0);
  CHECK(exit_code(ExitCause::hitting_time) == 2);
  CHECK(exit_code(ExitCause::order_not_attained) == 7);
  CHECK(cause_name(ExitCause::hitting_time) == "hitting-time");
}

TEST_CASE("equilibrium run matches the golden diagnostics") {
  const fs::path out = scratch("equilibrium");
  const SimulationResult r = run_simulation(parse_config(equilibrium_text), out);
  CHECK(r.cause == ExitCause::completed);
  CHECK(r.steps == 20);
  CHECK(r.final_state.t == doctest::Approx(0.02));
  CHECK((r.final_state.rho - ScalarField(r.final_state.rho.grid(), 1.0)).max_abs() == 0.0);

  const auto got = csv_cells(slurp(out / "diagnostics.csv"));
  const auto want = csv_cells(slurp(fs::path(NSF_GOLDEN_DIR) / "equilibrium_diagnostics.csv"));
  REQUIRE(got.size() == want.size());
  CHECK(got[0] == want[0]);
  for (std::size_t k = 1; k < got.size(); ++k) {
    REQUIRE(got[k].size() == want[k].size());
    for (std::size_t c = 0; c + 1 < got[k].size(); ++c)
      CHECK(std::stod(got[k][c]) == doctest::Approx(std::stod(want[k][c])).epsilon(1e-12).scale(1e-12));
    CHECK(got[k].back() == want[k].back());
  }
  const auto j = summary(out);
  CHECK(j["end"] == "completed");
  CHECK(j["M"] == 3.0);
  CHECK(j["flags"].empty());
}

TEST_CASE("identical configurations give identical output") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string text = std::string(equilibrium_text) + "fluid: {mu: 0.5}\n";
  std::string moving = text;
  moving.replace(moving.find("rho0: \"1\""), 9, "rho0: \"1 + 0.2 * x * y\"");
  run_simulation(parse_config(moving), a);
  run_simulation(parse_config(moving), b);
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("threshold below the initial amplitude stops at once") {
  const fs::path out = scratch("hitting");
  const SimulationResult r = run_simulation(parse_config(std::string(equilibrium_text) + "monitor: {M: 0.5}\n"), out);
  CHECK(r.cause == ExitCause::hitting_time);
  CHECK(r.steps == 0);
  REQUIRE(r.T_M);
  CHECK(*r.T_M == 0.0);
  REQUIRE(r.records.size() == 1);
  CHECK((r.records[0].flags & HittingTime) != 0u);
  const auto j = summary(out);
  CHECK(j["end"] == "hitting-time");
  CHECK(j["T_M"] == 0.0);
  CHECK(j["flags"][0] == "HittingTime");
}

TEST_CASE("compatibility gate") {
  std::string text = equilibrium_text;
  text.replace(text.find("u0: [\"0\", \"0\"]"), 14, "u0: [\"0.1\", \"0\"]");
  const SimulationResult r = run_simulation(parse_config(text), scratch("gate"));
  CHECK(r.cause == ExitCause::compatibility);
  CHECK(r.message.find("u0-u_B") != std::string::npos);
  CHECK(r.compatibility.value("u0-u_B") == doctest::Approx(0.1));
}

TEST_CASE("snapshots") {
  const fs::path out = scratch("snapshots");
  run_simulation(parse_config(std::string(equilibrium_text) + "output: {snapshot_every: 10}\n"), out);
  CHECK(fs::exists(out / "snapshot_000000.bin"));
  CHECK(fs::exists(out / "snapshot_000010.bin"));
  CHECK(fs::exists(out / "snapshot_000020.bin"));
  CHECK_FALSE(fs::exists(out / "snapshot_000005.bin"));
  const Snapshot s = read_snapshot(out / "snapshot_000020.bin");
  CHECK(s.fields.size() == 4);
}

TEST_CASE("manufactured data replay the verification leg") {
  const std::string text = R"(grid: {dim: 2, counts: [32, 32]}
data: manufactured
fluid: {mu: 0.05, lambda: 0.05, kappa: 0.5}
stepper: {t_end: 0.01}
monitor: {M: 1e6}
mms: {family: smooth}
)";
  const RunConfig cfg = parse_config(text);
  const SimulationResult sim = run_simulation(cfg, scratch("replay"));
  CHECK(sim.cause == ExitCause::completed);
  const Problem pb = build_problem(parse_config(text, Mode::mms_verify), 32);
  const RunResult rr = run(pb.initial, pb.params, pb.bd, pb.stepper);
  CHECK(rr.steps == sim.steps);
  CHECK((rr.final_state.rho - sim.final_state.rho).max_abs() == 0.0);
  CHECK((rr.final_state.theta - sim.final_state.theta).max_abs() == 0.0);
  CHECK((rr.final_state.u - sim.final_state.u).max_abs() == 0.0);
}

TEST_CASE("refinement studies") {
  SUBCASE("equilibrium has zero error") {
    const RunConfig cfg = parse_config("grid: {dim: 2, counts: [8, 8]}\nstepper: {t_end: 0.01}\nmms: {family: equilibrium}\n",
                                       Mode::mms_verify);
    const fs::path out = scratch("mms_eq");
    const MmsResult r = mms_verify(cfg, 2, out);
    CHECK(r.attained);
    for (const MmsLevel& l : r.levels) {
      CHECK(l.err_rho == 0.0);
      CHECK(l.err_theta < 1e-13);
      CHECK(l.err_u < 1e-13);
    }
    CHECK(std::isnan(r.levels[1].order_theta));
    const auto rows = csv_cells(slurp(out / "mms_convergence.csv"));
    CHECK(rows.size() == 3);
    CHECK(rows[0][0] == "level");
  }
  SUBCASE("heat conduction converges at second order") {
    const RunConfig cfg = parse_config(
        "grid: {dim: 2, counts: [16, 16]}\nfluid: {kappa: 0.5}\nstepper: {t_end: 0.02}\nmms: {family: heat}\n",
        Mode::mms_verify);
    const MmsResult r = mms_verify(cfg, 3, scratch("mms_heat"));
    CHECK(r.attained);
    CHECK(r.levels.back().order_theta == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("an inconsistent source is caught") {
    const RunConfig cfg = parse_config(
        "grid: {dim: 2, counts: [8, 8]}\nfluid: {kappa: 0.5}\nstepper: {t_end: 0.05}\nmms: {family: heat, inconsistency: 1.0}\n",
        Mode::mms_verify);
    const MmsResult r = mms_verify(cfg, 3, scratch("mms_bad"));
    CHECK_FALSE(r.attained);
    CHECK(std::abs(r.levels.back().order_theta) < 0.2);
    CHECK(r.message.find("theta order") != std::string::npos);
  }
}

TEST_CASE("extension test") {
  const std::string text = R"yaml(grid:
  dim: 2
  counts: [32, 32]
  temperature: {y_hi: neumann}
data:
  rho0: "1"
  theta0: extension
  u0: extension
  theta_B: "1 + 0.3 * y + 0.2 * sin(pi * x) * sinh(pi * y) / sinh(pi)"
  u_B: ["x * (1 - x) * y", "0"]
  q_B: "0.3 + 0.2 * pi * sin(pi * x) * cosh(pi) / sinh(pi)"
stepper: {t_end: 0.01}
)yaml";
  const fs::path out = scratch("extension");
  const ExtensionReport r = extension_test(parse_config(text, Mode::extension_test), out);
  CHECK(r.ok);
  CHECK(r.wall_residual == 0.0);
  CHECK(r.dirichlet_residual == 0.0);
  CHECK(r.neumann_residual < 1e-2);
  CHECK(r.theta_min >= 1.0 - 1e-9);
  CHECK_FALSE(fs::exists(out / "summary.json"));
  CHECK(nlohmann::json::parse(slurp(out / "extension.json"))["ok"] == true);
}
