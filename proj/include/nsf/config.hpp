#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/constitutive.hpp"
#include "nsf/expression.hpp"
#include "nsf/grid.hpp"
#include "nsf/monitor.hpp"
#include "nsf/state.hpp"
#include "nsf/stepper.hpp"

namespace nsf {

/// A rejected configuration. problems() lists every parse error (with its
/// line) or violated hypothesis, one entry each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Mode { simulate, mms_verify, extension_test };

struct DataBlock {
  /// Data, sources and grid come from the manufactured family of the mms block.
  bool manufactured = false;
  Expression rho0 = Expression::constant(1.0);
  Expression theta0 = Expression::constant(1.0);
  std::array<Expression, 2> u0{};
  /// Initial velocity / temperature taken from the boundary-data extensions.
  bool u0_from_extension = false;
  bool theta0_from_extension = false;
  Expression theta_B = Expression::constant(1.0);
  std::array<Expression, 2> u_B{};
  Expression q_B = Expression::constant(0.0);
};

struct FluidBlock {
  double mu = 1.0, lambda = 0.0, kappa = 1.0, cv = 1.0;
  Expression G = Expression::constant(0.0);
};

struct OutputBlock {
  std::string dir = "out";
  /// Snapshot every this many steps; 0 writes none.
  int snapshot_every = 0;
};

struct MmsBlock {
  std::string family = "smooth";
  /// dt = dt_factor * h^2 at every level, steps of fixed size.
  double dt_factor = 2.0;
  double expected_order = 2.0;
  /// Orders below expected_order - order_tol fail the verification.
  double order_tol = 0.1;
  /// Density is advected by first-order upwind.
  double expected_density_order = 1.0;
  /// Constant added to the heat source; any nonzero value makes the scheme
  /// inconsistent with the manufactured solution.
  double inconsistency = 0.0;
  int levels = 3;
};

struct RunConfig {
  Mode mode = Mode::simulate;
  GridSpec grid;
  FluidBlock fluid;
  DataBlock data;
  StepperConfig stepper;
  MonitorConfig monitor;
  OutputBlock output;
  MmsBlock mms;
  /// Largest zeroth-order compatibility residual accepted by the run gate.
  double compatibility_tol = 1e-8;
  /// The flux residual uses a one-sided derivative, so it carries O(h^2) error.
  double compatibility_flux_tol = 1e-2;
  /// Gate on the first-order residuals; unset reports them only.
  std::optional<double> compatibility_first_order_tol;
  /// q_B < 0 is accepted (with the temperature check disabled) instead of rejected.
  bool allow_negative_heat_flux = false;
  std::vector<std::string> warnings;

  Grid make_grid() const;
  FluidParams fluid_params(const Grid& g) const;
  /// Samples the boundary expressions; no extensions attached.
  BoundaryData boundary_data(const Grid& g) const;
  /// Initial state; needs bd with extensions when the data ask for them.
  State initial_state(const Grid& g, const BoundaryData& bd) const;
};

/// Parses and validates. `mode` overrides the file's mode key, since the
/// validation depends on it. Throws ConfigError.
RunConfig parse_config(const std::string& text, std::optional<Mode> mode = {});
RunConfig load_config(const std::string& path, std::optional<Mode> mode = {});

/// Every hypothesis on the data that fails at the grid nodes, each naming the
/// condition it mirrors. Empty for admissible data.
std::vector<std::string> hypothesis_violations(const RunConfig& cfg);

}  // namespace nsf
