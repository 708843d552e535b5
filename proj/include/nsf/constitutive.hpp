#pragma once

#include <array>
#include <stdexcept>

#include "nsf/field.hpp"

namespace nsf {

class ConstitutiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declared regularity of the potential G.
enum class PotentialRegularity { w1q, w2q };

struct FluidParams {
  double mu = 1.0;      ///< shear viscosity, > 0
  double lambda = 0.0;  ///< bulk viscosity, >= 0
  double kappa = 1.0;   ///< heat conductivity, > 0
  double cv = 1.0;      ///< specific heat at constant volume, > 0
  ScalarField G;        ///< potential sampled on the grid
  PotentialRegularity G_reg = PotentialRegularity::w2q;

  /// Throws ConstitutiveError when a sign constraint fails.
  void validate() const;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Newtonian stress in three-space,
///   S = mu (grad u + grad u^T - 2/3 div u I) + lambda div u I.
/// Lower-dimensional runs embed grad u in the leading block of a 3x3 matrix
/// and keep the remaining entries zero.
Mat3 stress_point(const Mat3& grad_u, double mu, double lambda);
/// S(D u) : D u.
double dissipation_point(const Mat3& grad_u, double mu, double lambda);

/// p = rho * theta; throws naming the field and node when an input is not positive.
ScalarField pressure(const ScalarField& rho, const ScalarField& theta);
/// e = c_v * theta.
ScalarField internal_energy(const ScalarField& theta, const FluidParams& params);
/// In-plane block of the stress. The out-of-plane diagonal entry, which the
/// 3x3 embedding also produces, is available from stress_out_of_plane.
TensorField stress(const TensorField& grad_u, const FluidParams& params);
/// S_zz = (lambda - 2 mu / 3) div u for d < 3 (zero field when d = 3 is absent).
ScalarField stress_out_of_plane(const TensorField& grad_u, const FluidParams& params);
/// q = -kappa grad theta.
VectorField heat_flux(const VectorField& grad_theta, const FluidParams& params);
/// S(D u) : D u per node; non-negative for mu > 0, lambda >= 0.
ScalarField dissipation(const TensorField& grad_u, const FluidParams& params);

}  // namespace nsf
