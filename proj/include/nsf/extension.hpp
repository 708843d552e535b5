#pragma once

#include "nsf/boundary.hpp"
#include "nsf/constitutive.hpp"
#include "nsf/elliptic.hpp"

namespace nsf {

class ExtensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Harmonic extension of the temperature data: Laplace's equation with theta_B
/// on Gamma_D and flux q_B on Gamma_N. Without Dirichlet faces the extension
/// is the constant inf theta0. Throws ExtensionError if the result is not
/// strictly positive.
ScalarField extend_temperature(const Grid& g, const BoundaryData& bd, const ScalarField& theta0,
                               const SolverOptions& opts = {});

/// Lame extension of the wall velocity, div S(grad u) = 0 with u = u_B on
/// walls. Fully periodic grids have no walls and yield zero.
VectorField extend_velocity(const Grid& g, const BoundaryData& bd, const FluidParams& params,
                            const SolverOptions& opts = {});

/// Fills bd.u_ext and bd.theta_ext.
void attach_extensions(const Grid& g, BoundaryData& bd, const FluidParams& params,
                       const ScalarField& theta0, const SolverOptions& opts = {});

}  // namespace nsf
