#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "nsf/config.hpp"
#include "nsf/expression.hpp"

using namespace nsf;
using std::numbers::pi;

namespace {

const char* base_config = R"(grid:
  dim: 2
  counts: [16, 16]
fluid:
  mu: 1.0
data:
  rho0: "1"
  theta0: "1"
  u0: ["0", "0"]
  theta_B: "1"
  u_B: ["0", "0"]
  q_B: "0"
stepper:
  dt: 1e-3
  t_end: 0.01
  p: 4
  q: 4
)";

std::string with(const std::string& from, const std::string& to) {
  std::string s = base_config;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

// every problem of the rejected text joined
std::string rejection(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(Expression::parse("1 + 2 * 3")(0) == 7.0);
  CHECK(Expression::parse("(1 + 2) * 3")(0) == 9.0);
  CHECK(Expression::parse("2 ^ 3 ^ 2")(0) == 512.0);
  CHECK(Expression::parse("-2 ^ 2")(0) == -4.0);
  CHECK(Expression::parse("8 / 4 / 2")(0) == 1.0);
  CHECK(Expression::parse("1e-3 * 2")(0) == 2e-3);
  CHECK(Expression::parse("x * y + t")(2, 3, 4) == 10.0);
  CHECK(Expression::parse("sin(pi * x)")(0.5) == doctest::Approx(1.0));
  CHECK(Expression::parse("exp(1) - e")(0) == doctest::Approx(0.0));
  CHECK(Expression::parse("pow(2, 10) + min(1, -1) + max(x, 3) + abs(-2)")(5) == 1024 - 1 + 5 + 2);
  CHECK(Expression::parse("sqrt(4) * log(e) + cos(0) + tan(0) + tanh(0) + sinh(0) + cosh(0)")(0) == 4.0);
  CHECK(Expression::constant(2.5)(7) == 2.5);
  CHECK(Expression()(1) == 0.0);

  const Expression e = Expression::parse("1 + y^2");
  CHECK(e.uses('y'));
  CHECK_FALSE(e.uses('x'));
  CHECK(e.text() == "1 + y^2");

  auto message = [](const std::string& s) -> std::string {
    try {
      Expression::parse(s);
    } catch (const ExpressionError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("1 + z").find("unknown name 'z'") != std::string::npos);
  CHECK(message("1 + z").find("column 5") != std::string::npos);
  CHECK(message("(1 + 2").find("expected ')'") != std::string::npos);
  CHECK(message("pow(1)").find("pow takes 2 arguments") != std::string::npos);
  CHECK(message("1 +").find("unexpected end") != std::string::npos);
  CHECK(message("2 3").find("unexpected '3'") != std::string::npos);
  CHECK(message("sin x").find("expected '('") != std::string::npos);
}

TEST_CASE("a minimal valid configuration") {
  const RunConfig cfg = parse_config(base_config);
  CHECK(cfg.mode == Mode::simulate);
  CHECK(cfg.grid.counts[0] == 16);
  CHECK_FALSE(cfg.monitor.M.has_value());
  CHECK(cfg.monitor.p == 4.0);
  CHECK(cfg.grid.heat_flux_vanishes);
  CHECK(cfg.warnings.empty());
  const Grid g = cfg.make_grid();
  const BoundaryData bd = cfg.boundary_data(g);
  CHECK(bd.violations(g).empty());
}

TEST_CASE("sections and values") {
  const std::string text = R"yaml(mode: simulate
grid:
  dim: 2
  extents: [2.0, 1.0]
  counts: [16, 8]
  topology: [periodic, walled]
  temperature: {y_lo: dirichlet, y_hi: neumann}
fluid:
  mu: 0.5
  lambda: 0.1
  kappa: 2
  cv: 1.5
  G: "-y"
data:
  rho0: "exp(-y)"
  theta0: "1"
  u0: ["0", "0"]
  theta_B: "1"
  u_B: ["0", "0"]
  q_B: "0"
stepper: {dt: 0.01, t_end: 1, cfl_safety: 0.4, p: 3, q: 5, fixed_dt: true}
monitor: {M: 40, min_tol: 1e-8, strict: true, gn_every: 0}
output: {dir: somewhere, snapshot_every: 10}
compatibility: {tol: 1e-9, first_order_tol: 0.5}
)yaml";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.grid.extents[0] == 2.0);
  CHECK(cfg.grid.topology[0] == Topology::periodic);
  CHECK(cfg.grid.temperature[3] == TempBc::neumann);
  CHECK(cfg.fluid.cv == 1.5);
  CHECK(cfg.fluid.G(0, 0.25) == -0.25);
  CHECK(cfg.stepper.fixed_dt);
  CHECK(cfg.stepper.cfl_safety == 0.4);
  CHECK(*cfg.monitor.M == 40.0);
  CHECK(cfg.monitor.strict);
  CHECK(cfg.monitor.q == 5.0);
  CHECK(cfg.output.dir == "somewhere");
  CHECK(cfg.output.snapshot_every == 10);
  CHECK(*cfg.compatibility_first_order_tol == 0.5);
  const Grid g = cfg.make_grid();
  CHECK(cfg.fluid_params(g).G.min() == doctest::Approx(-1.0));
  const State s = cfg.initial_state(g, cfg.boundary_data(g));
  CHECK(s.rho.max() == doctest::Approx(1.0));
}

TEST_CASE("hypothesis gate") {
  SUBCASE("exponents") {
    const std::string m = rejection(with("p: 4\n", "p: 1.2\n"));
    CHECK(m.find("LEa1") != std::string::npos);
    CHECK(m.find("1.6") != std::string::npos);
    CHECK(rejection(with("q: 4\n", "q: 3\n")).find("3 < q < inf") != std::string::npos);
  }
  SUBCASE("negative heat flux") {
    const std::string text = with("  counts: [16, 16]\n", "  counts: [16, 16]\n  temperature: {y_hi: neumann}\n");
    CHECK(rejection(text).empty());
    const std::string neg = [&] {
      std::string s = text;
      s.replace(s.find("q_B: \"0\""), 8, "q_B: \"-0.1\"");
      return s;
    }();
    CHECK(rejection(neg).find("q_B < 0 violates PP9") != std::string::npos);
    const RunConfig cfg = parse_config(neg + "hypotheses: {allow_negative_heat_flux: true}\n");
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings[0].find("q_B < 0") != std::string::npos);
  }
  SUBCASE("non-tangential wall velocity") {
    CHECK(rejection(with("u_B: [\"0\", \"0\"]", "u_B: [\"0\", \"0.1\"]")).find("u_B . n = 0") != std::string::npos);
    // tangential slip is admissible
    CHECK(rejection(with("u_B: [\"0\", \"0\"]", "u_B: [\"x * (1 - x) * y\", \"0\"]")).find("u_B . n") ==
          std::string::npos);
  }
  SUBCASE("no Dirichlet part with a nonzero flux") {
    std::string s = with("  counts: [16, 16]\n",
                         "  counts: [16, 16]\n  temperature: {x_lo: neumann, x_hi: neumann, y_lo: neumann, y_hi: neumann}\n");
    s.replace(s.find("q_B: \"0\""), 8, "q_B: \"0.2\"");
    CHECK(rejection(s).find("Gamma_D is empty") != std::string::npos);
  }
  SUBCASE("temperature data") {
    CHECK(rejection(with("theta_B: \"1\"", "theta_B: \"x - 0.5\"")).find("PP7") != std::string::npos);
    CHECK(rejection(with("theta0: \"1\"", "theta0: \"-1\"")).find("PP5") != std::string::npos);
    CHECK(rejection(with("rho0: \"1\"", "rho0: \"0\"")).find("PP4") != std::string::npos);
  }
  SUBCASE("every problem is listed") {
    std::string s = with("p: 4\n", "p: 1.2\n");
    s.replace(s.find("theta_B: \"1\""), 12, "theta_B: \"-1\"");
    try {
      parse_config(s);
      FAIL("accepted");
    } catch (const ConfigError& e) {
      CHECK(e.problems().size() >= 2);
    }
  }
  SUBCASE("fluid parameters") {
    CHECK_FALSE(rejection(with("mu: 1.0", "mu: -1.0")).empty());
  }
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(rejection("grid:\n  dim: [1\n").find("line ") != std::string::npos);
  const std::string unknown = rejection(with("  counts: [16, 16]\n", "  counts: [16, 16]\n  cont: 3\n"));
  CHECK(unknown.find("line 4: unknown key 'grid.cont'") != std::string::npos);
  const std::string bad_expr = rejection(with("rho0: \"1\"", "rho0: \"1 + q\""));
  CHECK(bad_expr.find("line 7:") != std::string::npos);
  CHECK(bad_expr.find("unknown name 'q'") != std::string::npos);
  CHECK(rejection(with("mu: 1.0", "mu: abc")).find("line 5: 'mu' must be a number") != std::string::npos);
  CHECK(rejection("- a\n- b\n").find("mapping") != std::string::npos);
  CHECK(rejection(with("grid:", "mode: sideways\ngrid:")).find("mode must be") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("manufactured data") {
  const std::string text = R"(grid: {dim: 2, counts: [16, 16]}
data: manufactured
stepper: {t_end: 0.01}
mms: {family: smooth}
)";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.data.manufactured);
  CHECK(rejection("grid: {dim: 2, counts: [16, 16]}\nmms: {family: nothing}\n").empty());
  CHECK_THROWS_AS(parse_config("grid: {dim: 2, counts: [16, 16]}\nmms: {family: nothing}\n", Mode::mms_verify),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("grid: {dim: 2, counts: [16, 16]}\nmms: {levels: 1}\n", Mode::mms_verify),
                  ConfigError);
}

TEST_CASE("data from extensions") {
  std::string s = with("theta0: \"1\"", "theta0: extension");
  s.replace(s.find("u0: [\"0\", \"0\"]"), 14, "u0: extension");
  const RunConfig cfg = parse_config(s);
  CHECK(cfg.data.theta0_from_extension);
  CHECK(cfg.data.u0_from_extension);
  const Grid g = cfg.make_grid();
  CHECK_THROWS_AS(cfg.initial_state(g, cfg.boundary_data(g)), std::logic_error);
  std::string no_dirichlet =
      with("  counts: [16, 16]\n", "  counts: [16, 16]\n  temperature: {x_lo: neumann, x_hi: neumann, y_lo: neumann, y_hi: neumann}\n");
  no_dirichlet.replace(no_dirichlet.find("theta0: \"1\""), 11, "theta0: extension");
  CHECK(rejection(no_dirichlet).find("extension needs a Dirichlet face") != std::string::npos);
}
