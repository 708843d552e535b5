#pragma once

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nsf/field.hpp"

namespace nsf {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// dt * sum_a max|u_a| / h_a. The upwind update is positivity preserving
/// whenever this is at most 1/2.
double cfl_number(const VectorField& u, double dt);

/// One conservative first-order upwind finite-volume step of
/// d_t rho + div(rho u) = 0 on the dual cells of the grid. Walls carry no flux.
ScalarField advance_density(const ScalarField& rho, const VectorField& u, double dt);

/// Discrete mass sum_n rho_n |dual cell n|.
double total_mass(const ScalarField& rho);

/// Velocity samples at increasing, uniformly spaced times.
struct VelocityHistory {
  std::vector<double> times;
  std::vector<VectorField> u;

  void push(double t, VectorField v);
  /// Linear-in-time, bilinear-in-space sample.
  std::array<double, 2> velocity(double t, std::array<double, 2> x) const;
  double divergence(double t, std::array<double, 2> x) const;

 private:
  std::vector<ScalarField> div_;
  std::pair<std::size_t, double> bracket(double t) const;
};

struct CharacteristicPath {
  std::array<double, 2> origin{};
  std::vector<double> times;
  std::vector<std::array<double, 2>> positions;
  std::vector<double> div_u;
};

/// Integrates X' = u(t, X), X(0) = x with classical RK4, one step per history
/// interval (the last step is shortened to land on t).
CharacteristicPath trace_characteristic(const VelocityHistory& history, std::array<double, 2> x,
                                        double t);

/// 1/rho(t, X(t, x)) = exp(int_0^t div u(s, X(s, x)) ds) / rho0(x), trapezoid
/// quadrature along the stored path.
double reciprocal_density_along_path(const ScalarField& rho0, const CharacteristicPath& path);

/// A renormalisation b with derivative b', defined for rho > lower
/// (or rho >= lower when `closed`).
struct Renormalization {
  std::function<double(double)> b;
  std::function<double(double)> db;
  double lower = -std::numeric_limits<double>::infinity();
  bool closed = true;

  static Renormalization identity();
  static Renormalization log();
  static Renormalization square();
  bool admits(double z) const { return closed ? z >= lower : z > lower; }
};

/// L2 norm, per step, of the discrete residual of
/// d_t b(rho) + u . grad b(rho) + b'(rho) rho div u,
/// time difference between consecutive samples, spatial terms averaged over
/// the two levels. rho_history[k] pairs with u_history.u[k].
std::vector<double> renormalized_residual(const Renormalization& b,
                                          const std::vector<ScalarField>& rho_history,
                                          const VelocityHistory& u_history);

}  // namespace nsf
