#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/constitutive.hpp"
#include "nsf/mms.hpp"
#include "nsf/norms.hpp"

namespace nsf {

class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum Flag : unsigned { HittingTime = 1u, PositivityLoss = 2u, BlowupSuspected = 4u };

/// "HittingTime|BlowupSuspected", empty for no flags.
std::string flag_names(unsigned flags);

/// One row of diagnostics per accepted step.
struct DiagnosticsRecord {
  int step = 0;
  double t = 0.0;
  double amplitude = 0.0;   ///< sup over (rho, theta, u)
  double w1inf = 0.0;       ///< W^{1,inf} norm of (theta, u)
  double control_F = 0.0;
  double rho_min = 0.0, rho_bound = 0.0;
  /// theta_bound is 0 when the temperature check is disabled.
  double theta_min = 0.0, theta_bound = 0.0;
  double energy_residual_momentum = 0.0;
  double energy_residual_heat = 0.0;
  /// 0 when u - u_B vanishes.
  double korn_ratio = 0.0;
  double grad_rho_ratio = 0.0;
  /// 0 when u vanishes.
  double gn_ratio = 0.0;
  double mass = 0.0;
  unsigned flags = 0;
};

/// Fixed CSV column order of DiagnosticsRecord.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

struct MonitorConfig {
  /// Hitting threshold; unset means 2 * initial amplitude + 1.
  std::optional<double> M;
  double p = 4.0;  ///< exponent of the control integral
  double q = 4.0;  ///< integrability exponent of the gradient and interpolation ratios
  double min_tol = 1e-6;
  double blowup_amplitude = 1e8;
  /// Largest tolerated growth rate of log(amplitude) per unit time over the window.
  double blowup_rate = 50.0;
  int blowup_window = 5;
  /// Interpolation ratio every this many records (0 disables it); it is the
  /// costly diagnostic. Records in between repeat the last value.
  int gn_every = 10;
  bool stop_on_hitting = true;
  bool stop_on_blowup = true;
  /// Positivity loss (failed minimum-principle check) ends the run.
  bool strict = false;

  void validate() const;
};

// ---- batch diagnostics -------------------------------------------------

/// F(t_k) = amplitude(t_k) + int_0^{t_k} ||(theta, u)||_{W^{1,inf}}^p dt, trapezoid rule.
std::vector<double> control_functional(const Trajectory& traj, double p);

struct HittingResult {
  double T_M = 0.0;
  bool hit = false;
};

/// First crossing of F >= M, linearly interpolated between samples; the last
/// sample time with hit = false if F stays below M.
HittingResult hitting_time(const std::vector<double>& times, const std::vector<double>& F, double M);

struct MinCheck {
  double min = 0.0;
  double bound = 0.0;
  bool ok = true;
};

/// min rho(t) against min rho0 exp(-int ||div u||_inf).
std::vector<MinCheck> density_min_check(const Trajectory& traj, double tol = 1e-6);

struct TemperatureCheck {
  bool enabled = true;
  std::string warning;
  std::vector<MinCheck> series;
};

/// min theta(t) against min(min theta0, min theta_B) exp(-(1/c_v) int ||div u||_inf).
/// Disabled when q_B < 0 somewhere.
TemperatureCheck temperature_min_check(const Trajectory& traj, const BoundaryData& bd,
                                       const FluidParams& params, double tol = 1e-6);

/// Momentum energy balance on [t_{k-1}, t_k], w = u - u_B (interior extension):
///   d/dt 1/2 int rho |w|^2 + int S(Du):Dw + int rho (u.grad u_B).w - int p div w
///   - int rho grad G.w - int rho f_u.w - 1/2 int f_rho |w|^2.
/// The time derivative is a difference quotient, the other terms average both
/// levels. Entry 0 is 0. Needs bd.u_ext.
std::vector<double> momentum_energy_residual(const Trajectory& traj, const BoundaryData& bd,
                                             const FluidParams& params,
                                             const std::optional<Forcing>& forcing = {});

/// Heat energy balance with eta = theta - theta_B (harmonic extension):
///   c_v d/dt 1/2 int rho eta^2 + kappa int |grad eta|^2 - int eta S:Du
///   + int eta p div u + c_v int rho eta u.grad theta_B - c_v int rho eta f_theta
///   - c_v/2 int f_rho eta^2.
/// Needs bd.theta_ext.
std::vector<double> heat_energy_residual(const Trajectory& traj, const BoundaryData& bd,
                                         const FluidParams& params,
                                         const std::optional<Forcing>& forcing = {});

/// int S(Dw):Dw / ||w||_{W^{1,2}}^2; throws for w = 0.
double korn_ratio(const VectorField& w, const FluidParams& params);

/// sup_{s<=t} ||grad rho||_q / (exp(2 int ||div u||_inf) (||grad rho0||_q + int ||u||_{W^{2,q}})),
/// 0 when both sides vanish.
std::vector<double> grad_density_bound_ratio(const Trajectory& traj, double q);

/// ||u||_{W^{s,q}} / (||u||_{W^{alpha,q}}^{1/2} ||u||_{W^{2,q}}^{1/2}) with s = 1 + alpha/2.
/// Fractional norms are second-order modulus norms B^s_{q,q}. alpha defaults
/// to 1 - 1/p and must lie in (0, 2(1 - 1/p)). Throws for u = 0.
double gn_ratio(const VectorField& u, double p, double q, std::optional<double> alpha = {});

struct CompatibilityReport {
  /// (label, sup over the relevant boundary nodes)
  std::vector<std::pair<std::string, double>> entries;
  double max() const;
  double value(const std::string& label) const;
};

/// Zeroth order: u0 - u_B on walls, theta0 - theta_B on Gamma_D,
/// grad theta0 . n - q_B on Gamma_N. First order: the initial momentum
/// acceleration on walls, the initial temperature rate on Gamma_D and its
/// normal derivative on Gamma_N.
CompatibilityReport compatibility_residuals(const ScalarField& rho0, const ScalarField& theta0,
                                            const VectorField& u0, const BoundaryData& bd,
                                            const FluidParams& params);

/// Flags per record: BlowupSuspected when the amplitude exceeds the threshold
/// or log(amplitude) grew faster than blowup_rate over the last window;
/// HittingTime from control_F >= M.
std::vector<unsigned> blowup_flag(const std::vector<DiagnosticsRecord>& records,
                                  const MonitorConfig& cfg, double M);

// ---- incremental monitor ----------------------------------------------

/// Consumes states one at a time and emits a record per state.
class Monitor {
 public:
  Monitor(MonitorConfig cfg, FluidParams params, BoundaryData bd,
          std::optional<Forcing> forcing = {});

  /// The first call fixes the initial data and resolves M.
  const DiagnosticsRecord& observe(const State& s);

  double M() const { return M_; }
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  bool temperature_check_enabled() const { return theta_enabled_; }
  const std::string& warning() const { return warning_; }
  /// Hitting time once the threshold was crossed.
  std::optional<double> T_M() const { return T_M_; }
  /// The configured termination policy asks to stop after the last record.
  bool should_stop() const;

 private:
  MonitorConfig cfg_;
  FluidParams params_;
  BoundaryData bd_;
  std::optional<Forcing> forcing_;
  std::optional<State> prev_;
  std::vector<DiagnosticsRecord> records_;
  double M_ = 0.0;
  bool theta_enabled_ = true;
  std::string warning_;
  std::optional<double> T_M_;
  double rho0_min_ = 0.0, theta_floor_ = 0.0, grad_rho0_ = 0.0;
  double int_div_ = 0.0, int_control_ = 0.0, int_w2q_ = 0.0, sup_grad_rho_ = 0.0;
  double prev_div_ = 0.0, prev_w1inf_ = 0.0, prev_w2q_ = 0.0;
  double last_gn_ = 0.0;
};

/// JSON run summary: M, T_M, flags seen, final record, final norms.
std::string summary_json(const Monitor& m, const State& final_state, const std::string& end_cause);

}  // namespace nsf
