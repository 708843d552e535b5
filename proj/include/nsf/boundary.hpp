#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsf/field.hpp"
#include "nsf/operators.hpp"

namespace nsf {

/// Time-independent boundary data of the heat-conducting flow problem.
///
/// All traces are stored per face and indexed by Grid::tangential_index.
/// theta_B lives on Gamma_D faces, q_B on Gamma_N faces, and both velocity
/// components on every walled face.
struct BoundaryData {
  std::array<FaceTrace, 2> u_B;
  FaceTrace theta_B;
  FaceTrace q_B;
  /// Interior extensions, filled by the extension solvers.
  std::optional<VectorField> u_ext;
  std::optional<ScalarField> theta_ext;

  using VectorFn = std::function<std::array<double, 2>(double, double)>;
  using ScalarFn = std::function<double(double, double)>;

  static BoundaryData sample(const Grid& g, const VectorFn& u_b, const ScalarFn& theta_b,
                             const ScalarFn& q_b);

  /// Every hypothesis on the boundary data that fails, one message each.
  std::vector<std::string> violations(const Grid& g) const;
  bool q_nonnegative(const Grid& g) const;
  bool q_vanishes(const Grid& g) const;
  /// min over Gamma_D of theta_B; +inf when Gamma_D is empty.
  double min_theta_B(const Grid& g) const;
  /// Field carrying u_B on walled nodes and zero elsewhere.
  VectorField wall_velocity(const Grid& g) const;
  BoundaryClosure temperature_closure(const Grid& g) const;
};

}  // namespace nsf
