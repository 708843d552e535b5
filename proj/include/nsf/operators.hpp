#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nsf/field.hpp"

namespace nsf {

/// Boundary condition used to close a stencil on one walled face. Values are
/// indexed by Grid::tangential_index. Neumann values are outward normal
/// derivatives, grad f . n.
struct FaceCondition {
  TempBc kind = TempBc::dirichlet;
  std::vector<double> values;
};

/// Stencil closure for every walled face. Periodic faces need no entry.
struct BoundaryClosure {
  std::array<std::optional<FaceCondition>, 4> faces;

  /// Dirichlet on every walled face using the field's own boundary values.
  static BoundaryClosure self_dirichlet(const ScalarField& f);
  /// Dirichlet on Gamma_D faces with `dirichlet` values and Neumann on Gamma_N
  /// faces with `neumann` values, following the grid's temperature tags.
  static BoundaryClosure mixed(const Grid& g, const FaceTrace& dirichlet, const FaceTrace& neumann);
};

/// First derivative along `axis`: centred in the interior, one-sided
/// second order on walls, wrapped on periodic axes. Zero for axis >= dim.
ScalarField partial(const ScalarField& f, int axis);
/// Second derivative. Pure second derivatives use the compact three-point
/// stencil (four-point one-sided on walls); mixed ones compose `partial`.
ScalarField second_partial(const ScalarField& f, int a, int b);

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
/// Full velocity gradient, component (a, b) = d v_a / d x_b.
TensorField grad_tensor(const VectorField& v);
/// (grad v + grad v^T) / 2.
TensorField sym_grad(const VectorField& v);
/// (u . grad) f.
ScalarField advect(const VectorField& u, const ScalarField& f);

/// Compact second-order Laplacian. Boundary nodes of walled faces use a ghost
/// value from `closure`: Dirichlet ghosts extrapolate quadratically through the
/// boundary value, Neumann ghosts mirror with the prescribed outward flux.
/// Throws FieldError when a walled face has no closure.
ScalarField laplacian(const ScalarField& f, const BoundaryClosure& closure);

/// Trapezoid-rule integral over the domain.
double integrate(const ScalarField& f);
/// Integral of f * g.
double integrate_product(const ScalarField& f, const ScalarField& g);

/// Bilinear interpolation at (x, y); periodic axes wrap, walled axes clamp.
double interpolate(const ScalarField& f, double x, double y = 0.0);

/// Outward normal derivative on a face, one-sided second order; indexed by
/// tangential index.
std::vector<double> normal_derivative(const ScalarField& f, Face face);

/// Restriction of a field to a face, indexed by tangential index.
std::vector<double> restrict_to_face(const ScalarField& f, Face face);

}  // namespace nsf
