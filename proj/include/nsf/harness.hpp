#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/monitor.hpp"

namespace nsf {

/// Why a run ended. The process exit status is exit_code(cause).
enum class ExitCause {
  completed,
  hitting_time,
  blowup,
  positivity_loss,
  compatibility,
  solver_failure,
  order_not_attained,
  extension_failure,
};

/// 0 completed, 2 hitting-time, 3 blow-up, 4 positivity-loss,
/// 5 compatibility, 6 solver-failure, 7 order-not-attained, 8 extension-failure.
/// Configuration and I/O errors exit with 1 from the CLI.
int exit_code(ExitCause c);
/// "completed", "hitting-time", ...
std::string cause_name(ExitCause c);

/// Everything a run needs, built from a configuration.
struct Problem {
  Grid grid;
  FluidParams params;
  BoundaryData bd;  ///< extensions attached
  State initial;
  StepperConfig stepper;
};

/// Expression data, or the manufactured family at n cells per axis
/// (n = 0 takes grid.counts[0]).
Problem build_problem(const RunConfig& cfg, int n = 0);

struct SimulationResult {
  ExitCause cause = ExitCause::completed;
  std::string message;
  State final_state;
  int steps = 0;
  std::optional<double> T_M;
  std::vector<DiagnosticsRecord> records;
  CompatibilityReport compatibility;
};

/// Extensions, compatibility gate, run loop. Writes diagnostics.csv,
/// summary.json and snapshots (snapshot_NNNNNN.bin) into out_dir.
SimulationResult run_simulation(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                std::ostream* log = nullptr);

struct MmsLevel {
  int n = 0;
  double h = 0.0, dt = 0.0;
  int steps = 0;
  double err_rho = 0.0, err_theta = 0.0, err_u = 0.0;
  /// Orders against the previous level; NaN on the first level or below the noise floor.
  double order_rho = 0.0, order_theta = 0.0, order_u = 0.0;
};

struct MmsResult {
  std::vector<MmsLevel> levels;
  bool attained = true;
  std::string message;
};

/// Errors below this are round-off; their orders are not assessed.
inline constexpr double mms_noise_floor = 1e-11;

/// Runs the manufactured family on `levels` grids (n, 2n, 4n, ...) concurrently
/// and writes mms_convergence.csv into out_dir. attained is false when an
/// order on the finest pair falls below expected_order - order_tol.
MmsResult mms_verify(const RunConfig& cfg, int levels, const std::filesystem::path& out_dir);

struct ExtensionReport {
  double laplace_residual = 0.0;   ///< sup of the discrete Laplacian of theta_B in the interior
  double dirichlet_residual = 0.0; ///< sup |theta_B - data| on Gamma_D
  double neumann_residual = 0.0;   ///< sup |grad theta_B . n - q_B| on Gamma_N
  double lame_residual = 0.0;      ///< sup of the Lame operator of u_B in the interior
  double wall_residual = 0.0;      ///< sup |u_B - data| on walls
  double theta_min = 0.0;
  bool ok = true;
};

/// Builds both extensions, reports residuals and writes extension.json.
ExtensionReport extension_test(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace nsf
