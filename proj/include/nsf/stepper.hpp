#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "nsf/boundary.hpp"
#include "nsf/constitutive.hpp"
#include "nsf/elliptic.hpp"
#include "nsf/mms.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Why a step failed.
enum class StepFailure { cfl, positivity, solver, invalid_state };

class StepError : public std::runtime_error {
 public:
  StepError(StepFailure kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  StepFailure kind() const { return kind_; }

 private:
  StepFailure kind_;
};

/// Exponents (p, q) must satisfy 3 < q < inf and 2q/(2q-3) < p < inf.
/// Returns an empty string when they do, otherwise the violation.
std::string exponent_violation(double p, double q);

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  double p = 4.0;
  double q = 4.0;
  /// Use `dt` as is (time-refinement studies). The transport CFL bound is
  /// still enforced and raises instead of shrinking the step.
  bool fixed_dt = false;
  std::optional<Forcing> forcing;
  SolverOptions solver{};

  /// Throws std::invalid_argument on dt <= 0, t_end < 0, cfl_safety outside
  /// (0, 1] or exponents outside the admissible range.
  void validate() const;
};

/// min(dt, cfl_safety h / max(|u| + sqrt(theta)), 0.5 / sum_a max|u_a|/h_a).
double select_dt(const State& s, const StepperConfig& cfg);

/// Throws StepError(invalid_state) unless rho > 0, theta > 0 and u = u_B on walls.
void validate_state(const State& s, const BoundaryData& bd);

/// One IMEX step of length dt. Density: conservative upwind. Momentum:
/// advection, pressure and potential explicit, viscous term implicit with
/// the density frozen at the step start. Temperature: advection, dissipation
/// and compression explicit, conduction implicit with the Gamma_D / Gamma_N
/// closures.
State step(const State& s, const FluidParams& params, const BoundaryData& bd,
           const StepperConfig& cfg, double dt);

/// One step of length min(select_dt(s, cfg), t_end - s.t).
State step(const State& s, const FluidParams& params, const BoundaryData& bd,
           const StepperConfig& cfg);

/// Observer called with every accepted state, the initial one included
/// (step index 0). Returning false stops the run.
using StepObserver = std::function<bool(const State&, int step)>;

enum class RunEnd { completed, stopped };

struct RunResult {
  State final_state;
  int steps = 0;
  RunEnd end = RunEnd::completed;
};

/// Steps from `initial` until t_end or until the observer declines.
/// Step errors are rethrown with the step index prefixed.
RunResult run(const State& initial, const FluidParams& params, const BoundaryData& bd,
              const StepperConfig& cfg, const StepObserver& observer = {});

}  // namespace nsf
