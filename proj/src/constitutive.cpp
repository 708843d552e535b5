#include "nsf/constitutive.hpp"

#include <string>

namespace nsf {

void FluidParams::validate() const {
  if (!(mu > 0.0)) throw ConstitutiveError("mu must be > 0 (p5)");
  if (!(lambda >= 0.0)) throw ConstitutiveError("lambda must be >= 0 (p5)");
  if (!(kappa > 0.0)) throw ConstitutiveError("kappa must be > 0 (p6)");
  if (!(cv > 0.0)) throw ConstitutiveError("c_v must be > 0 (p4)");
}

Mat3 stress_point(const Mat3& grad_u, double mu, double lambda) {
  const double divu = grad_u[0][0] + grad_u[1][1] + grad_u[2][2];
  Mat3 s{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      s[a][b] = mu * (grad_u[a][b] + grad_u[b][a]);
      if (a == b) s[a][b] += (lambda - 2.0 * mu / 3.0) * divu;
    }
  }
  return s;
}

double dissipation_point(const Mat3& grad_u, double mu, double lambda) {
  const Mat3 s = stress_point(grad_u, mu, lambda);
  double out = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out += s[a][b] * 0.5 * (grad_u[a][b] + grad_u[b][a]);
  return out;
}

namespace {

void require_positive_input(const ScalarField& f, const char* name) {
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (!(f[n] > 0.0)) {
      throw ConstitutiveError(std::string(name) + " must be positive; node (" +
                              std::to_string(f.grid().ix(n)) + ", " +
                              std::to_string(f.grid().iy(n)) + ") holds " + std::to_string(f[n]));
    }
  }
}

Mat3 embed(const TensorField& t, std::size_t n) {
  Mat3 m{};
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b) m[a][b] = t(a, b)[n];
  return m;
}

}  // namespace

ScalarField pressure(const ScalarField& rho, const ScalarField& theta) {
  require_positive_input(rho, "rho");
  require_positive_input(theta, "theta");
  return hadamard(rho, theta);
}

ScalarField internal_energy(const ScalarField& theta, const FluidParams& params) {
  require_positive_input(theta, "theta");
  return params.cv * theta;
}

TensorField stress(const TensorField& grad_u, const FluidParams& params) {
  const Grid& g = grad_u.grid();
  TensorField s(g, true);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Mat3 m = stress_point(embed(grad_u, n), params.mu, params.lambda);
    for (int a = 0; a < g.dim(); ++a)
      for (int b = 0; b < g.dim(); ++b) s(a, b)[n] = m[a][b];
  }
  return s;
}

ScalarField stress_out_of_plane(const TensorField& grad_u, const FluidParams& params) {
  return (params.lambda - 2.0 * params.mu / 3.0) * grad_u.trace();
}

VectorField heat_flux(const VectorField& grad_theta, const FluidParams& params) {
  return -params.kappa * grad_theta;
}

ScalarField dissipation(const TensorField& grad_u, const FluidParams& params) {
  const Grid& g = grad_u.grid();
  ScalarField out(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    out[n] = dissipation_point(embed(grad_u, n), params.mu, params.lambda);
  }
  return out;
}

}  // namespace nsf
