#include "nsf/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/operators.hpp"

namespace nsf {

FieldTuple components(const VectorField& u) {
  FieldTuple out;
  for (int a = 0; a < u.dim(); ++a) out.push_back(&u[a]);
  return out;
}

FieldTuple components(const ScalarField& theta, const VectorField& u) {
  FieldTuple out{&theta};
  for (int a = 0; a < u.dim(); ++a) out.push_back(&u[a]);
  return out;
}

FieldTuple components(const State& s) {
  FieldTuple out{&s.rho, &s.theta};
  for (int a = 0; a < s.u.dim(); ++a) out.push_back(&s.u[a]);
  return out;
}

void NormSpec::validate() const {
  if (k < 0 || k > 2) throw NormError("derivative order k must be 0, 1 or 2");
  if (!(q >= 1.0)) throw NormError("integrability exponent q must be at least 1");
  const bool composite = kind == NormKind::composite_spq || kind == NormKind::composite_dpqi ||
                         kind == NormKind::composite_chk;
  if ((kind == NormKind::besov || composite) && !(s() > 0.0 && s() < 2.0))
    throw NormError("Besov smoothness 2(1 - 1/p) must lie in (0, 2)");
  if (composite && !(q > 3.0 && std::isfinite(q)))
    throw NormError("composite norms need 3 < q < inf");
}

double lq_norm(const ScalarField& f, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw NormError("lq_norm needs 1 <= q < inf");
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) s += g.weight(n) * std::pow(std::abs(f[n]), q);
  return std::pow(s * g.cell_measure(), 1.0 / q);
}

double lq_norm(const VectorField& u, double q) { return lq_norm(u.magnitude(), q); }

double sobolev_norm(const ScalarField& f, int k, double q) {
  if (k < 0 || k > 2) throw NormError("sobolev_norm supports k = 0, 1, 2");
  const int d = f.grid().dim();
  double s = lq_norm(f, q);
  if (k >= 1)
    for (int a = 0; a < d; ++a) s += lq_norm(partial(f, a), q);
  if (k >= 2)
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) s += lq_norm(second_partial(f, a, b), q);
  return s;
}

double sobolev_norm(const VectorField& u, int k, double q) {
  return sobolev_norm(components(u), k, q);
}

double sobolev_norm(const FieldTuple& fs, int k, double q) {
  double s = 0.0;
  for (const ScalarField* f : fs) s += sobolev_norm(*f, k, q);
  return s;
}

double sup_norm(const FieldTuple& fs) {
  double m = 0.0;
  for (const ScalarField* f : fs) m = std::max(m, f->max_abs());
  return m;
}

double w1inf_norm(const FieldTuple& fs) {
  double d = 0.0;
  for (const ScalarField* f : fs)
    for (int a = 0; a < f->grid().dim(); ++a) d = std::max(d, partial(*f, a).max_abs());
  return sup_norm(fs) + d;
}

double modulus_of_smoothness(const ScalarField& f, double t, double q) {
  const Grid& g = f.grid();
  const double cell = g.cell_measure();
  double best = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    const int na = g.nodes(a);
    const int kmax = static_cast<int>(std::floor(t / h + 1e-9));
    for (int k = 1; k <= kmax; ++k) {
      if (!g.periodic(a) && 2 * k > na - 1) break;
      if (g.periodic(a) && k >= na) break;
      double s = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) {
        const int i = a == 0 ? g.ix(n) : g.iy(n);
        if (!g.periodic(a) && i + 2 * k > na - 1) continue;
        auto node = [&](int off) {
          const int m = (i + off) % na;
          return a == 0 ? g.index(m, g.iy(n)) : g.index(g.ix(n), m);
        };
        const double d2 = f[node(2 * k)] - 2.0 * f[node(k)] + f[n];
        s += std::pow(std::abs(d2), q);
      }
      best = std::max(best, std::pow(s * cell, 1.0 / q));
    }
  }
  return best;
}

double besov_modulus_norm(const ScalarField& f, double s, double q, double r) {
  if (!(s > 0.0 && s < 2.0)) {
    std::ostringstream os;
    os << "Besov smoothness s = " << s << " lies outside (0, 2)";
    throw NormError(os.str());
  }
  const Grid& g = f.grid();
  double L = 0.0;
  for (int a = 0; a < g.dim(); ++a) L = std::max(L, g.extent(a));
  const int J = static_cast<int>(std::floor(std::log2(L / g.min_spacing()) + 1e-9));
  double sum = 0.0;
  for (int j = 0; j <= J; ++j) {
    const double w = std::pow(2.0, j * s) * modulus_of_smoothness(f, L * std::pow(2.0, -j), q);
    sum += std::pow(w, r);
  }
  return lq_norm(f, q) + std::pow(sum, 1.0 / r);
}

double besov_norm(const ScalarField& f, double p, double q) {
  return besov_modulus_norm(f, 2.0 * (1.0 - 1.0 / p), q, p);
}

double besov_norm(const FieldTuple& fs, double p, double q) {
  double s = 0.0;
  for (const ScalarField* f : fs) s += besov_norm(*f, p, q);
  return s;
}

ScalarField material_derivative(const ScalarField& g_prev, const ScalarField& g_now,
                                const VectorField& u, double dt) {
  ScalarField out = g_now - g_prev;
  out *= 1.0 / dt;
  return out + advect(u, g_now);
}

void Trajectory::push(State s) { states.push_back(std::move(s)); }

void Trajectory::validate() const {
  for (std::size_t k = 1; k < states.size(); ++k) {
    if (!(states[k].t > states[k - 1].t)) throw NormError("trajectory times must increase strictly");
    if (states[k].grid() != states[0].grid()) throw NormError("trajectory states live on different grids");
  }
}

double time_lp(const std::vector<double>& times, const std::vector<double>& g, double p) {
  double s = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k)
    s += 0.5 * (times[k] - times[k - 1]) * (std::pow(g[k], p) + std::pow(g[k - 1], p));
  return std::pow(s, 1.0 / p);
}

namespace {

void require_samples(const Trajectory& traj) {
  if (traj.size() < 2) throw NormError("time norms need at least two samples");
  traj.validate();
}

std::vector<double> sample_times(const Trajectory& traj) {
  std::vector<double> t;
  for (const State& s : traj.states) t.push_back(s.t);
  return t;
}

// Backward-difference time derivative of every state variable.
State time_derivative(const Trajectory& traj, std::size_t k) {
  const std::size_t j = std::max<std::size_t>(k, 1);
  const State& a = traj.states[j - 1];
  const State& b = traj.states[j];
  const double inv = 1.0 / (b.t - a.t);
  State d;
  d.t = traj.states[k].t;
  d.rho = (b.rho - a.rho) * inv;
  d.theta = (b.theta - a.theta) * inv;
  d.u = inv * (b.u - a.u);
  return d;
}

void check_composite_q(double q) {
  if (!(q > 3.0) || !std::isfinite(q)) throw NormError("composite norms need 3 < q < inf");
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw NormError("time exponent p must satisfy 1 < p < inf");
}

}  // namespace

double solution_norm_Spq(const Trajectory& traj, double p, double q) {
  check_composite_q(q);
  check_p(p);
  require_samples(traj);
  const std::vector<double> t = sample_times(traj);
  double rho_sup = 0.0;
  std::vector<double> w2q, dt_q;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    rho_sup = std::max(rho_sup, sobolev_norm(s.rho, 1, q));
    w2q.push_back(sobolev_norm(components(s.theta, s.u), 2, q));
    const State d = time_derivative(traj, k);
    double l = 0.0;
    for (const ScalarField* f : components(d)) l += lq_norm(*f, q);
    dt_q.push_back(l);
  }
  const State& s0 = traj.states.front();
  return rho_sup + time_lp(t, w2q, p) + time_lp(t, dt_q, p) +
         besov_norm(components(s0.theta, s0.u), p, q);
}

double data_norm_DpqI(const ScalarField& rho0, const ScalarField& theta0, const VectorField& u0,
                      double p, double q) {
  check_p(p);
  return sobolev_norm(rho0, 1, q) + besov_norm(components(theta0, u0), p, q);
}

double chk_norm(const Trajectory& traj, double q) {
  if (!(q > 3.0 && q <= 6.0)) {
    std::ostringstream os;
    os << "chk_norm needs 3 < q <= 6, got q = " << q;
    throw NormError(os.str());
  }
  require_samples(traj);
  const std::vector<double> t = sample_times(traj);
  double rho_w1q = 0.0, rho_t = 0.0, w22 = 0.0, dt_l2 = 0.0;
  std::vector<double> w2q, dt_w12;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    const State d = time_derivative(traj, k);
    const FieldTuple tu = components(s.theta, s.u);
    const FieldTuple dtu = components(d.theta, d.u);
    rho_w1q = std::max(rho_w1q, sobolev_norm(s.rho, 1, q));
    rho_t = std::max(rho_t, lq_norm(d.rho, q));
    w22 = std::max(w22, sobolev_norm(tu, 2, 2.0));
    w2q.push_back(sobolev_norm(tu, 2, q));
    double l2 = 0.0;
    for (const ScalarField* f : dtu) l2 += lq_norm(*f, 2.0);
    dt_l2 = std::max(dt_l2, l2);
    dt_w12.push_back(sobolev_norm(dtu, 1, 2.0));
  }
  return rho_w1q + rho_t + w22 + time_lp(t, w2q, 2.0) + dt_l2 + time_lp(t, dt_w12, 2.0);
}

double data_norm_ChK(const ScalarField& rho0, const ScalarField& theta0, const VectorField& u0,
                     double q) {
  return sobolev_norm(rho0, 1, q) + sobolev_norm(u0, 2, 2.0) + sobolev_norm(theta0, 2, 2.0);
}

}  // namespace nsf
