#pragma once

#include "nsf/field.hpp"

namespace nsf {

/// (rho, theta, u) at time t.
struct State {
  double t = 0.0;
  ScalarField rho;
  ScalarField theta;
  VectorField u;

  const Grid& grid() const { return rho.grid(); }
};

}  // namespace nsf
