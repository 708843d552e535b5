#include "nsf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/operators.hpp"

namespace nsf {

double cfl_number(const VectorField& u, double dt) {
  const Grid& g = u.grid();
  double c = 0.0;
  for (int a = 0; a < g.dim(); ++a) c += dt * u[a].max_abs() / g.spacing(a);
  return c;
}

double total_mass(const ScalarField& rho) {
  const Grid& g = rho.grid();
  double m = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) m += rho[n] * g.weight(n);
  return m * g.cell_measure();
}

ScalarField advance_density(const ScalarField& rho, const VectorField& u, double dt) {
  const Grid& g = rho.grid();
  if (u.grid() != g) throw TransportError("advance_density: velocity lives on a different grid");
  if (!(dt > 0.0)) throw TransportError("advance_density: dt must be positive");
  rho.require_positive("rho");
  const double cfl = cfl_number(u, dt);
  if (cfl > 0.5 + 1e-12) {
    std::ostringstream os;
    os << "CFL violation: dt * sum max|u_a|/h_a = " << cfl << " > 0.5";
    throw TransportError(os.str());
  }

  // flux balance per node, in units of mass per time
  std::vector<double> net(g.size(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    const int b = 1 - a;
    const int na = g.nodes(a);
    const int links = g.periodic(a) ? na : na - 1;
    const double h_perp = g.dim() > 1 ? g.spacing(b) : 1.0;
    for (int t = 0; t < g.nodes(b); ++t) {
      const double area = h_perp * (g.dim() > 1 ? g.axis_weight(b, t) : 1.0);
      for (int k = 0; k < links; ++k) {
        const int k1 = (k + 1) % na;
        const std::size_t p = a == 0 ? g.index(k, t) : g.index(t, k);
        const std::size_t q = a == 0 ? g.index(k1, t) : g.index(t, k1);
        const double uf = 0.5 * (u[a][p] + u[a][q]);
        const double flux = area * (uf > 0.0 ? uf * rho[p] : uf * rho[q]);
        net[p] -= flux;
        net[q] += flux;
      }
    }
  }

  ScalarField out(g);
  const double cell = g.cell_measure();
  for (std::size_t n = 0; n < g.size(); ++n) {
    out[n] = rho[n] + dt * net[n] / (g.weight(n) * cell);
    if (!(out[n] > 0.0)) {
      std::ostringstream os;
      os << "density lost positivity at node (" << g.ix(n) << ", " << g.iy(n) << "): " << out[n];
      throw TransportError(os.str());
    }
  }
  return out;
}

void VelocityHistory::push(double t, VectorField v) {
  if (!times.empty() && !(t > times.back()))
    throw TransportError("VelocityHistory: times must increase");
  times.push_back(t);
  div_.push_back(div(v));
  u.push_back(std::move(v));
}

std::pair<std::size_t, double> VelocityHistory::bracket(double t) const {
  if (times.empty()) throw TransportError("VelocityHistory is empty");
  if (times.size() == 1) return {0, 0.0};
  const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (t < times.front() - tol || t > times.back() + tol)
    throw TransportError("VelocityHistory does not span the requested time");
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  k = std::min(k, times.size() - 2);
  const double s = std::clamp((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0);
  return {k, s};
}

std::array<double, 2> VelocityHistory::velocity(double t, std::array<double, 2> x) const {
  const auto [k, s] = bracket(t);
  std::array<double, 2> v{0.0, 0.0};
  const VectorField& a = u[k];
  for (int c = 0; c < a.dim(); ++c) {
    const double v0 = interpolate(a[c], x[0], x[1]);
    const double v1 = s > 0.0 ? interpolate(u[k + 1][c], x[0], x[1]) : v0;
    v[static_cast<std::size_t>(c)] = (1.0 - s) * v0 + s * v1;
  }
  return v;
}

double VelocityHistory::divergence(double t, std::array<double, 2> x) const {
  const auto [k, s] = bracket(t);
  const double d0 = interpolate(div_[k], x[0], x[1]);
  const double d1 = s > 0.0 ? interpolate(div_[k + 1], x[0], x[1]) : d0;
  return (1.0 - s) * d0 + s * d1;
}

namespace {

// Wraps periodic coordinates; clamps walled ones that stray by less than h.
std::array<double, 2> settle(const Grid& g, std::array<double, 2> x) {
  for (int a = 0; a < g.dim(); ++a) {
    double& c = x[static_cast<std::size_t>(a)];
    const double L = g.extent(a);
    if (g.periodic(a)) {
      c = std::fmod(c, L);
      if (c < 0.0) c += L;
    } else {
      if (c < -g.spacing(a) || c > L + g.spacing(a)) {
        std::ostringstream os;
        os << "characteristic left the domain along axis " << a << " (coordinate " << c << ")";
        throw TransportError(os.str());
      }
      c = std::clamp(c, 0.0, L);
    }
  }
  return x;
}

}  // namespace

CharacteristicPath trace_characteristic(const VelocityHistory& history, std::array<double, 2> x,
                                        double t) {
  if (history.times.empty()) throw TransportError("trace_characteristic: empty velocity history");
  const Grid& g = history.u.front().grid();
  const double t0 = history.times.front();
  if (t < 0.0 || t0 + t > history.times.back() + 1e-12 * std::max(1.0, t))
    throw TransportError("trace_characteristic: velocity history does not span [0, t]");

  CharacteristicPath path;
  path.origin = x;
  x = settle(g, x);
  path.times.push_back(0.0);
  path.positions.push_back(x);
  path.div_u.push_back(history.divergence(t0, x));
  if (t == 0.0) return path;

  const double h = history.times.size() > 1 ? history.times[1] - history.times[0] : t;
  auto shifted = [&](const std::array<double, 2>& p, const std::array<double, 2>& k, double c) {
    return settle(g, {p[0] + c * k[0], p[1] + c * k[1]});
  };
  double s = 0.0;
  while (s < t - 1e-12 * std::max(1.0, t)) {
    const double dt = std::min(h, t - s);
    const double ta = t0 + s;
    const auto k1 = history.velocity(ta, x);
    const auto k2 = history.velocity(ta + 0.5 * dt, shifted(x, k1, 0.5 * dt));
    const auto k3 = history.velocity(ta + 0.5 * dt, shifted(x, k2, 0.5 * dt));
    const auto k4 = history.velocity(ta + dt, shifted(x, k3, dt));
    std::array<double, 2> inc{};
    for (int c = 0; c < 2; ++c)
      inc[c] = (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]) / 6.0;
    x = shifted(x, inc, dt);
    s += dt;
    path.times.push_back(s);
    path.positions.push_back(x);
    path.div_u.push_back(history.divergence(t0 + s, x));
  }
  return path;
}

double reciprocal_density_along_path(const ScalarField& rho0, const CharacteristicPath& path) {
  double integral = 0.0;
  for (std::size_t k = 1; k < path.times.size(); ++k)
    integral += 0.5 * (path.times[k] - path.times[k - 1]) * (path.div_u[k] + path.div_u[k - 1]);
  const double r0 = interpolate(rho0, path.positions.front()[0], path.positions.front()[1]);
  return std::exp(integral) / r0;
}

Renormalization Renormalization::identity() {
  return {[](double z) { return z; }, [](double) { return 1.0; }};
}

Renormalization Renormalization::log() {
  return {[](double z) { return std::log(z); }, [](double z) { return 1.0 / z; }, 0.0, false};
}

Renormalization Renormalization::square() {
  return {[](double z) { return z * z; }, [](double z) { return 2.0 * z; }};
}

std::vector<double> renormalized_residual(const Renormalization& b,
                                          const std::vector<ScalarField>& rho_history,
                                          const VelocityHistory& u_history) {
  if (rho_history.size() != u_history.times.size())
    throw TransportError("renormalized_residual: density and velocity histories differ in length");
  for (std::size_t k = 0; k < rho_history.size(); ++k)
    for (std::size_t n = 0; n < rho_history[k].size(); ++n)
      if (!b.admits(rho_history[k][n])) {
        std::ostringstream os;
        os << "renormalized_residual: rho = " << rho_history[k][n] << " at step " << k
           << " lies outside the domain of b";
        throw TransportError(os.str());
      }

  auto spatial = [&](std::size_t k) {
    const ScalarField& rho = rho_history[k];
    const VectorField& u = u_history.u[k];
    const ScalarField br = rho.map(b.b);
    ScalarField s = advect(u, br);
    const ScalarField dv = div(u);
    for (std::size_t n = 0; n < s.size(); ++n) s[n] += b.db(rho[n]) * rho[n] * dv[n];
    return s;
  };

  std::vector<double> out;
  if (rho_history.size() < 2) return out;
  ScalarField prev = spatial(0);
  for (std::size_t k = 0; k + 1 < rho_history.size(); ++k) {
    ScalarField next = spatial(k + 1);
    const double dt = u_history.times[k + 1] - u_history.times[k];
    ScalarField r = rho_history[k + 1].map(b.b) - rho_history[k].map(b.b);
    r *= 1.0 / dt;
    for (std::size_t n = 0; n < r.size(); ++n) r[n] += 0.5 * (prev[n] + next[n]);
    out.push_back(std::sqrt(integrate_product(r, r)));
    prev = std::move(next);
  }
  return out;
}

}  // namespace nsf
