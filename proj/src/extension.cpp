#include "nsf/extension.hpp"

namespace nsf {

ScalarField extend_temperature(const Grid& g, const BoundaryData& bd, const ScalarField& theta0,
                               const SolverOptions& opts) {
  ScalarField ext(g);
  if (!g.has_dirichlet_face()) {
    ext = ScalarField(g, theta0.min());
  } else {
    ext = solve_mixed_poisson(ScalarField(g), bd.theta_B, bd.q_B, ScalarField(g, 1.0), opts);
  }
  if (!(ext.min() > 0.0)) {
    throw ExtensionError("temperature extension is not positive (min " + std::to_string(ext.min()) +
                         ")");
  }
  return ext;
}

VectorField extend_velocity(const Grid& g, const BoundaryData& bd, const FluidParams& params,
                            const SolverOptions& opts) {
  if (!g.walled(0) && !g.walled(1)) return VectorField(g);
  LameProblem pb{std::nullopt, params.mu, params.lambda, VectorField(g), bd.wall_velocity(g)};
  return solve_lame(pb, nullptr, opts);
}

void attach_extensions(const Grid& g, BoundaryData& bd, const FluidParams& params,
                       const ScalarField& theta0, const SolverOptions& opts) {
  bd.u_ext = extend_velocity(g, bd, params, opts);
  bd.theta_ext = extend_temperature(g, bd, theta0, opts);
}

}  // namespace nsf
