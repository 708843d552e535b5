#include "nsf/mms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nsf {

Jet Jet::variable(double value, int k) {
  Jet j(value);
  j.d[static_cast<std::size_t>(k)] = 1.0;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 3; ++i) {
    r.d[i] = a.d[i] + b.d[i];
    for (int j = 0; j < 3; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
  }
  return r;
}

Jet operator-(const Jet& a) {
  Jet r(-a.v);
  for (int i = 0; i < 3; ++i) {
    r.d[i] = -a.d[i];
    for (int j = 0; j < 3; ++j) r.h[i][j] = -a.h[i][j];
  }
  return r;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 3; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int j = 0; j < 3; ++j)
      r.h[i][j] = a.h[i][j] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i] + a.v * b.h[i][j];
  }
  return r;
}

namespace {

// g(a) for a scalar function with derivatives g0, g1, g2 at a.v
Jet chain(const Jet& a, double g0, double g1, double g2) {
  Jet r(g0);
  for (int i = 0; i < 3; ++i) {
    r.d[i] = g1 * a.d[i];
    for (int j = 0; j < 3; ++j) r.h[i][j] = g1 * a.h[i][j] + g2 * a.d[i] * a.d[j];
  }
  return r;
}

}  // namespace

Jet operator/(const Jet& a, const Jet& b) {
  const double inv = 1.0 / b.v;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

Jet pow(const Jet& a, double e) {
  return chain(a, std::pow(a.v, e), e * std::pow(a.v, e - 1.0), e * (e - 1.0) * std::pow(a.v, e - 2.0));
}

namespace {

struct Point {
  Jet t, x, y;
};

Point at(double t, double x, double y) {
  return {Jet::variable(t, 0), Jet::variable(x, 1), Jet::variable(y, 2)};
}

}  // namespace

State Manufactured::state(const Grid& g, double t) const {
  State s;
  s.t = t;
  s.rho = ScalarField::sample(g, [&](double x, double y) { return rho(t, x, y).v; });
  s.theta = ScalarField::sample(g, [&](double x, double y) { return theta(t, x, y).v; });
  s.u = VectorField(g);
  for (int a = 0; a < g.dim(); ++a)
    s.u[a] = ScalarField::sample(g, [&](double x, double y) { return u[a](t, x, y).v; });
  return s;
}

ScalarField Manufactured::potential(const Grid& g) const {
  if (!G) return ScalarField(g);
  return ScalarField::sample(g, [&](double x, double y) { return G(0.0, x, y).v; });
}

BoundaryData Manufactured::boundary_data(const Grid& g) const {
  const int dim = g.dim();
  return BoundaryData::sample(
      g,
      [&](double x, double y) {
        std::array<double, 2> v{0.0, 0.0};
        for (int a = 0; a < dim; ++a) v[a] = u[a](0.0, x, y).v;
        return v;
      },
      [&](double x, double y) { return theta(0.0, x, y).v; },
      [&](double x, double y) {
        // outward normal derivative; the face is recovered from the position
        const Point p = at(0.0, x, y);
        const Jet th = theta(p.t, p.x, p.y);
        for (Face f : all_faces) {
          if (!g.has_face(f)) continue;
          const int ax = axis_of(f);
          const double c = ax == 0 ? x : y;
          const double wall = is_high_side(f) ? g.extent(ax) : 0.0;
          if (std::abs(c - wall) < 1e-12 * std::max(1.0, g.extent(ax)) &&
              g.temperature_bc(f) == TempBc::neumann)
            return outward_sign(f) * th.d[1 + ax];
        }
        return 0.0;
      });
}

void Manufactured::check_compatibility(const Grid& g, const std::vector<double>& times) const {
  const double tol = 1e-10;
  for (double t : times) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double x = g.x(n), y = g.y(n);
      const Point p = at(t, x, y);
      if (!(rho(p.t, p.x, p.y).v > 0.0) || !(theta(p.t, p.x, p.y).v > 0.0)) {
        std::ostringstream os;
        os << "manufactured density or temperature is not positive at (" << x << ", " << y
           << "), t = " << t;
        throw MmsError(os.str());
      }
    }
    for (Face f : all_faces) {
      if (!g.has_face(f)) continue;
      const int ax = axis_of(f);
      for (std::size_t n : g.face_nodes(f)) {
        const double x = g.x(n), y = g.y(n);
        const Point p = at(t, x, y);
        const Point p0 = at(0.0, x, y);
        std::ostringstream os;
        os << "manufactured solution is not boundary compatible on face " << face_name(f)
           << " at (" << x << ", " << y << "), t = " << t << ": ";
        if (std::abs(u[ax](p.t, p.x, p.y).v) > tol)
          throw MmsError(os.str() + "u . n != 0");
        for (int a = 0; a < g.dim(); ++a)
          if (std::abs(u[a](p.t, p.x, p.y).v - u[a](p0.t, p0.x, p0.y).v) > tol)
            throw MmsError(os.str() + "wall velocity varies in time");
        const Jet th = theta(p.t, p.x, p.y);
        const Jet th0 = theta(p0.t, p0.x, p0.y);
        if (g.temperature_bc(f) == TempBc::dirichlet) {
          if (std::abs(th.v - th0.v) > tol) throw MmsError(os.str() + "theta on Gamma_D varies in time");
        } else if (std::abs(th.d[1 + ax] - th0.d[1 + ax]) > tol) {
          throw MmsError(os.str() + "heat flux on Gamma_N varies in time");
        }
      }
    }
  }
}

Manufactured Manufactured::equilibrium() {
  Manufactured m;
  m.rho = [](const Jet&, const Jet&, const Jet&) { return Jet(1.0); };
  m.theta = [](const Jet&, const Jet&, const Jet&) { return Jet(1.0); };
  m.u = {[](const Jet&, const Jet&, const Jet&) { return Jet(0.0); },
         [](const Jet&, const Jet&, const Jet&) { return Jet(0.0); }};
  return m;
}

Manufactured Manufactured::smooth(int dim) {
  using std::numbers::pi;
  Manufactured m;
  m.rho = [](const Jet& t, const Jet&, const Jet&) { return 1.0 + 0.2 * sin(2.0 * t); };
  if (dim == 1) {
    m.u = {[](const Jet& t, const Jet& x, const Jet&) { return 0.5 * cos(t) * sin(2.0 * pi * x); },
           [](const Jet&, const Jet&, const Jet&) { return Jet(0.0); }};
    m.theta = [](const Jet& t, const Jet& x, const Jet&) {
      const Jet s = sin(pi * x);
      return 1.0 + 0.25 * x * x + 0.3 * (1.0 + sin(2.0 * t)) * s * s;
    };
    m.G = [](const Jet&, const Jet& x, const Jet&) { return 0.5 * x; };
    return m;
  }
  m.u = {[](const Jet& t, const Jet& x, const Jet& y) {
           return 0.5 * cos(t) * sin(pi * x) * sin(2.0 * pi * y);
         },
         [](const Jet& t, const Jet& x, const Jet& y) {
           return -0.5 * cos(t) * sin(2.0 * pi * x) * sin(pi * y);
         }};
  m.theta = [](const Jet& t, const Jet& x, const Jet& y) {
    const Jet s = sin(pi * x) * sin(pi * y);
    return 1.0 + 0.1 * x + 0.25 * y * y + 0.3 * (1.0 + sin(2.0 * t)) * s * s;
  };
  m.G = [](const Jet&, const Jet&, const Jet& y) { return 0.5 * y; };
  return m;
}

Manufactured Manufactured::heat(int dim) {
  Manufactured m = smooth(dim);
  m.rho = [](const Jet&, const Jet&, const Jet&) { return Jet(1.0); };
  m.u = {[](const Jet&, const Jet&, const Jet&) { return Jet(0.0); },
         [](const Jet&, const Jet&, const Jet&) { return Jet(0.0); }};
  m.G = nullptr;
  return m;
}

Manufactured Manufactured::varying_density(int dim) {
  using std::numbers::pi;
  Manufactured m = smooth(dim);
  if (dim == 1) {
    m.rho = [](const Jet& t, const Jet& x, const Jet&) {
      return 1.0 + 0.2 * sin(2.0 * t) + 0.1 * cos(pi * x);
    };
  } else {
    m.rho = [](const Jet& t, const Jet& x, const Jet& y) {
      return 1.0 + 0.2 * sin(2.0 * t) + 0.1 * cos(pi * x) * cos(pi * y);
    };
  }
  return m;
}

Manufactured Manufactured::family(const std::string& name, int dim) {
  if (name == "equilibrium") return equilibrium();
  if (name == "heat") return heat(dim);
  if (name == "smooth") return smooth(dim);
  if (name == "varying_density") return varying_density(dim);
  throw MmsError("unknown manufactured family '" + name +
                 "' (expected equilibrium, heat, smooth or varying_density)");
}

GridSpec Manufactured::smooth_grid(int dim, int n) {
  GridSpec s;
  s.dim = dim;
  s.counts = {n, dim > 1 ? n : 0};
  s.temperature = {TempBc::dirichlet, dim > 1 ? TempBc::dirichlet : TempBc::neumann,
                   TempBc::dirichlet, TempBc::neumann};
  s.heat_flux_vanishes = false;
  return s;
}

PointSource mms_source(const Manufactured& m, const FluidParams& params, int dim, double t,
                       double x, double y) {
  const Point p = at(t, x, y);
  const Jet r = m.rho(p.t, p.x, p.y);
  const Jet th = m.theta(p.t, p.x, p.y);
  std::array<Jet, 2> u{m.u[0](p.t, p.x, p.y), dim > 1 ? m.u[1](p.t, p.x, p.y) : Jet(0.0)};
  const Jet G = m.G ? m.G(p.t, p.x, p.y) : Jet(0.0);

  double divu = 0.0;
  for (int a = 0; a < dim; ++a) divu += u[a].d[1 + a];
  auto advect = [&](const Jet& f) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += u[a].v * f.d[1 + a];
    return s;
  };
  auto lap = [&](const Jet& f) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += f.h[1 + a][1 + a];
    return s;
  };

  PointSource src;
  src.rho = r.d[0] + advect(r) + r.v * divu;

  const double mu = params.mu, lam = params.lambda;
  for (int a = 0; a < dim; ++a) {
    double grad_div = 0.0;
    for (int b = 0; b < dim; ++b) grad_div += u[b].h[1 + a][1 + b];
    const double div_s = mu * lap(u[a]) + (mu / 3.0 + lam) * grad_div;
    src.u[a] = u[a].d[0] + advect(u[a]) - div_s / r.v + th.v * r.d[1 + a] / r.v + th.d[1 + a] -
               G.d[1 + a];
  }

  Mat3 gu{};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) gu[a][b] = u[a].d[1 + b];
  const double diss = dissipation_point(gu, mu, lam);
  src.theta = th.d[0] + advect(th) - params.kappa / (params.cv * r.v) * lap(th) -
              diss / (params.cv * r.v) + th.v * divu / params.cv;
  return src;
}

Forcing mms_forcing(Manufactured m, FluidParams params, int dim) {
  return [m = std::move(m), params = std::move(params), dim](double t, double x, double y) {
    return mms_source(m, params, dim, t, x, y);
  };
}

}  // namespace nsf
