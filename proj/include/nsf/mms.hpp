#pragma once

#include <array>
#include <functional>
#include <string>
#include <stdexcept>
#include <vector>

#include "nsf/boundary.hpp"
#include "nsf/constitutive.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Value, gradient and Hessian with respect to (t, x, y), propagated by
/// forward-mode differentiation.
struct Jet {
  double v = 0.0;
  std::array<double, 3> d{};
  std::array<std::array<double, 3>, 3> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  /// The independent variable with index k (0 = t, 1 = x, 2 = y).
  static Jet variable(double value, int k);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double e);

class MmsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using JetFn = std::function<Jet(const Jet& t, const Jet& x, const Jet& y)>;

/// Closed-form (rho*, theta*, u*) and potential G(x, y).
struct Manufactured {
  JetFn rho;
  JetFn theta;
  std::array<JetFn, 2> u;
  JetFn G;  ///< time argument ignored; empty means zero

  State state(const Grid& g, double t) const;
  ScalarField potential(const Grid& g) const;
  /// Boundary data read off at t = 0: u* on walls, theta* on Gamma_D and
  /// grad theta* . n on Gamma_N.
  BoundaryData boundary_data(const Grid& g) const;
  /// Throws MmsError when the traces on walls drift in time (the boundary
  /// data are time independent), when u* . n != 0, or when rho*, theta* are
  /// not positive, checked at the given times.
  void check_compatibility(const Grid& g, const std::vector<double>& times) const;

  static Manufactured equilibrium();
  /// Smooth family on the unit square (or interval) with walls on every side,
  /// Gamma_N = {y = 1} (x = 1 in 1D) and Gamma_D the rest:
  ///   rho*   = 1 + 0.2 sin 2t
  ///   u*     = 0.5 cos t (sin(pi x) sin(2 pi y), -sin(2 pi x) sin(pi y))   (2D)
  ///            0.5 cos t sin(2 pi x)                                     (1D)
  ///   theta* = 1 + 0.1 x + 0.25 y^2 + 0.3 (1 + sin 2t) sin^2(pi x) sin^2(pi y)
  ///   G      = 0.5 y
  /// In 1D y is dropped and 0.25 x^2 replaces 0.1 x + 0.25 y^2. The density is
  /// spatially uniform, so the first-order upwind flux adds no O(h) error.
  static Manufactured smooth(int dim);
  /// theta* of smooth() with the fluid at rest, rho* = 1, G = 0.
  static Manufactured heat(int dim);
  /// smooth() with rho* += 0.1 cos(pi x) cos(pi y), so the upwind flux error
  /// (first order) enters every field.
  static Manufactured varying_density(int dim);
  /// By name: equilibrium, heat, smooth, varying_density.
  static Manufactured family(const std::string& name, int dim);
  /// Grid matching smooth(): unit box, n cells per axis, mixed temperature tags.
  static GridSpec smooth_grid(int dim, int n);
};

/// Pointwise sources for the continuity, momentum and heat equations.
struct PointSource {
  double rho = 0.0;
  std::array<double, 2> u{};
  double theta = 0.0;
};

using Forcing = std::function<PointSource(double t, double x, double y)>;

/// Residuals of the reformulated system evaluated on the manufactured fields:
///   f_rho   = rho_t + u . grad rho + rho div u
///   f_u     = u_t + u . grad u - (1/rho) div S + theta grad log rho + grad theta - grad G
///   f_theta = theta_t + u . grad theta - kappa/(cv rho) Lap theta
///             - S:D/(cv rho) + theta div u / cv
PointSource mms_source(const Manufactured& m, const FluidParams& params, int dim, double t,
                       double x, double y);

/// Forcing closure over mms_source.
Forcing mms_forcing(Manufactured m, FluidParams params, int dim);

}  // namespace nsf
