#include "nsf/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "nsf/operators.hpp"
#include "nsf/transport.hpp"

namespace nsf {

std::string flag_names(unsigned flags) {
  std::string out;
  auto add = [&](unsigned f, const char* name) {
    if (!(flags & f)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(HittingTime, "HittingTime");
  add(PositivityLoss, "PositivityLoss");
  add(BlowupSuspected, "BlowupSuspected");
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "step",      "t",         "amplitude",   "w1inf",       "control_F",
      "rho_min",   "rho_bound", "theta_min",   "theta_bound", "energy_residual_momentum",
      "energy_residual_heat",   "korn_ratio",  "grad_rho_ratio", "gn_ratio",
      "mass",      "flags"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const std::string& c : csv_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << r.step << ',' << r.t << ',' << r.amplitude << ',' << r.w1inf << ',' << r.control_F << ','
     << r.rho_min << ',' << r.rho_bound << ',' << r.theta_min << ',' << r.theta_bound << ','
     << r.energy_residual_momentum << ',' << r.energy_residual_heat << ',' << r.korn_ratio << ','
     << r.grad_rho_ratio << ',' << r.gn_ratio << ',' << r.mass << ',' << flag_names(r.flags);
  return os.str();
}

void MonitorConfig::validate() const {
  if (M && !(*M > 0.0)) throw MonitorError("monitor: M must be positive");
  if (!(p >= 1.0)) throw MonitorError("monitor: control exponent p must be at least 1");
  if (!(q >= 1.0)) throw MonitorError("monitor: q must be at least 1");
  if (!(min_tol >= 0.0)) throw MonitorError("monitor: min_tol must be non-negative");
  if (!(blowup_amplitude > 0.0) || !(blowup_rate > 0.0) || blowup_window < 1)
    throw MonitorError("monitor: blow-up threshold, rate and window must be positive");
  if (gn_every < 0) throw MonitorError("monitor: gn_every must be non-negative");
}

namespace {

double amplitude_of(const State& s) { return sup_norm(components(s)); }
double w1inf_of(const State& s) { return w1inf_norm(components(s.theta, s.u)); }
double div_sup(const VectorField& u) { return div(u).max_abs(); }

ScalarField potential_or_zero(const FluidParams& params, const Grid& g) {
  return params.G.size() == g.size() ? params.G : ScalarField(g);
}

struct Sources {
  ScalarField rho, theta;
  VectorField u;
};

std::optional<Sources> sample_sources(const std::optional<Forcing>& forcing, const Grid& g, double t) {
  if (!forcing) return std::nullopt;
  Sources s{ScalarField(g), ScalarField(g), VectorField(g)};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const PointSource p = (*forcing)(t, g.x(n), g.y(n));
    s.rho[n] = p.rho;
    s.theta[n] = p.theta;
    for (int a = 0; a < g.dim(); ++a) s.u[a][n] = p.u[static_cast<std::size_t>(a)];
  }
  return s;
}

// Momentum balance: kinetic energy of w and the instantaneous terms.
struct MomentumTerms {
  double energy = 0.0;
  double rate = 0.0;
};

MomentumTerms momentum_terms(const State& s, const VectorField& ub, const FluidParams& params,
                             const std::optional<Forcing>& forcing) {
  const Grid& g = s.grid();
  const int d = g.dim();
  const VectorField w = s.u - ub;
  const ScalarField rw2 = hadamard(s.rho, dot(w, w));
  MomentumTerms out;
  out.energy = 0.5 * integrate(rw2);
  const TensorField S = stress(grad_tensor(s.u), params);
  double r = integrate(contract(S, sym_grad(w)));
  VectorField conv(g);
  for (int a = 0; a < d; ++a) conv[a] = advect(s.u, ub[a]);
  r += integrate_product(s.rho, dot(conv, w));
  r -= integrate_product(pressure(s.rho, s.theta), div(w));
  r -= integrate_product(s.rho, dot(grad(potential_or_zero(params, g)), w));
  if (const auto src = sample_sources(forcing, g, s.t)) {
    r -= integrate_product(s.rho, dot(src->u, w));
    r -= 0.5 * integrate_product(src->rho, dot(w, w));
  }
  out.rate = r;
  return out;
}

struct HeatTerms {
  double energy = 0.0;
  double rate = 0.0;
};

HeatTerms heat_terms(const State& s, const ScalarField& tb, const FluidParams& params,
                     const std::optional<Forcing>& forcing) {
  const Grid& g = s.grid();
  const ScalarField eta = s.theta - tb;
  const TensorField gu = grad_tensor(s.u);
  const ScalarField rho_eta = hadamard(s.rho, eta);
  HeatTerms out;
  out.energy = 0.5 * params.cv * integrate_product(rho_eta, eta);
  const VectorField ge = grad(eta);
  double r = params.kappa * integrate(dot(ge, ge));
  r -= integrate_product(eta, dissipation(gu, params));
  r += integrate_product(hadamard(eta, pressure(s.rho, s.theta)), gu.trace());
  r += params.cv * integrate_product(rho_eta, advect(s.u, tb));
  if (const auto src = sample_sources(forcing, g, s.t)) {
    r -= params.cv * integrate_product(rho_eta, src->theta);
    r -= 0.5 * params.cv * integrate_product(src->rho, hadamard(eta, eta));
  }
  out.rate = r;
  return out;
}

double momentum_interval(const State& a, const State& b, const VectorField& ub,
                         const FluidParams& params, const std::optional<Forcing>& forcing) {
  const MomentumTerms ta = momentum_terms(a, ub, params, forcing);
  const MomentumTerms tb = momentum_terms(b, ub, params, forcing);
  return (tb.energy - ta.energy) / (b.t - a.t) + 0.5 * (ta.rate + tb.rate);
}

double heat_interval(const State& a, const State& b, const ScalarField& thb,
                     const FluidParams& params, const std::optional<Forcing>& forcing) {
  const HeatTerms ta = heat_terms(a, thb, params, forcing);
  const HeatTerms tb = heat_terms(b, thb, params, forcing);
  return (tb.energy - ta.energy) / (b.t - a.t) + 0.5 * (ta.rate + tb.rate);
}

const VectorField& require_u_ext(const BoundaryData& bd) {
  if (!bd.u_ext) throw MonitorError("energy residuals need the velocity extension (attach_extensions)");
  return *bd.u_ext;
}

const ScalarField& require_theta_ext(const BoundaryData& bd) {
  if (!bd.theta_ext)
    throw MonitorError("energy residuals need the temperature extension (attach_extensions)");
  return *bd.theta_ext;
}

void require_nonempty(const Trajectory& traj) {
  if (traj.size() == 0) throw MonitorError("empty trajectory");
  traj.validate();
}

bool min_ok(double value, double bound, double tol) { return value >= bound * (1.0 - tol); }

unsigned blowup_at(const std::vector<DiagnosticsRecord>& recs, std::size_t k, const MonitorConfig& cfg) {
  const DiagnosticsRecord& r = recs[k];
  if (!(r.amplitude <= cfg.blowup_amplitude)) return BlowupSuspected;
  const auto w = static_cast<std::size_t>(cfg.blowup_window);
  if (k < w) return 0;
  const DiagnosticsRecord& o = recs[k - w];
  if (!(o.amplitude > 0.0) || !(r.t > o.t)) return 0;
  const double rate = (std::log(r.amplitude) - std::log(o.amplitude)) / (r.t - o.t);
  return rate > cfg.blowup_rate ? unsigned{BlowupSuspected} : 0u;
}

}  // namespace

std::vector<double> control_functional(const Trajectory& traj, double p) {
  require_nonempty(traj);
  std::vector<double> F;
  double integral = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    const double g = std::pow(w1inf_of(s), p);
    if (k > 0) integral += 0.5 * (s.t - traj.states[k - 1].t) * (prev + g);
    prev = g;
    F.push_back(amplitude_of(s) + integral);
  }
  return F;
}

HittingResult hitting_time(const std::vector<double>& times, const std::vector<double>& F, double M) {
  if (times.empty() || times.size() != F.size()) throw MonitorError("hitting_time: mismatched series");
  if (F[0] >= M) return {times[0], true};
  for (std::size_t k = 1; k < F.size(); ++k) {
    if (F[k] < M) continue;
    const double s = (M - F[k - 1]) / (F[k] - F[k - 1]);
    return {times[k - 1] + s * (times[k] - times[k - 1]), true};
  }
  return {times.back(), false};
}

std::vector<MinCheck> density_min_check(const Trajectory& traj, double tol) {
  require_nonempty(traj);
  const double m0 = traj.states[0].rho.min();
  std::vector<MinCheck> out;
  double integral = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    const double d = div_sup(s.u);
    if (k > 0) integral += 0.5 * (s.t - traj.states[k - 1].t) * (prev + d);
    prev = d;
    const double bound = m0 * std::exp(-integral);
    out.push_back({s.rho.min(), bound, min_ok(s.rho.min(), bound, tol)});
  }
  return out;
}

TemperatureCheck temperature_min_check(const Trajectory& traj, const BoundaryData& bd,
                                       const FluidParams& params, double tol) {
  require_nonempty(traj);
  const Grid& g = traj.states[0].grid();
  TemperatureCheck out;
  if (!bd.q_nonnegative(g)) {
    out.enabled = false;
    out.warning = "temperature minimum check disabled: q_B < 0 somewhere on Gamma_N";
    return out;
  }
  const double m0 = std::min(traj.states[0].theta.min(), bd.min_theta_B(g));
  double integral = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    const double d = div_sup(s.u);
    if (k > 0) integral += 0.5 * (s.t - traj.states[k - 1].t) * (prev + d);
    prev = d;
    const double bound = m0 * std::exp(-integral / params.cv);
    out.series.push_back({s.theta.min(), bound, min_ok(s.theta.min(), bound, tol)});
  }
  return out;
}

std::vector<double> momentum_energy_residual(const Trajectory& traj, const BoundaryData& bd,
                                             const FluidParams& params,
                                             const std::optional<Forcing>& forcing) {
  require_nonempty(traj);
  const VectorField& ub = require_u_ext(bd);
  std::vector<double> out{0.0};
  for (std::size_t k = 1; k < traj.size(); ++k)
    out.push_back(momentum_interval(traj.states[k - 1], traj.states[k], ub, params, forcing));
  return out;
}

std::vector<double> heat_energy_residual(const Trajectory& traj, const BoundaryData& bd,
                                         const FluidParams& params,
                                         const std::optional<Forcing>& forcing) {
  require_nonempty(traj);
  const ScalarField& tb = require_theta_ext(bd);
  std::vector<double> out{0.0};
  for (std::size_t k = 1; k < traj.size(); ++k)
    out.push_back(heat_interval(traj.states[k - 1], traj.states[k], tb, params, forcing));
  return out;
}

double korn_ratio(const VectorField& w, const FluidParams& params) {
  const double den = std::pow(sobolev_norm(w, 1, 2.0), 2);
  if (!(den > 0.0)) throw MonitorError("korn_ratio: zero field");
  return integrate(dissipation(grad_tensor(w), params)) / den;
}

std::vector<double> grad_density_bound_ratio(const Trajectory& traj, double q) {
  require_nonempty(traj);
  const double g0 = lq_norm(grad(traj.states[0].rho), q);
  std::vector<double> out;
  double int_div = 0.0, int_w2q = 0.0, prev_div = 0.0, prev_w2q = 0.0, sup_lhs = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& s = traj.states[k];
    const double d = div_sup(s.u), w = sobolev_norm(s.u, 2, q);
    if (k > 0) {
      const double dt = s.t - traj.states[k - 1].t;
      int_div += 0.5 * dt * (prev_div + d);
      int_w2q += 0.5 * dt * (prev_w2q + w);
    }
    prev_div = d;
    prev_w2q = w;
    sup_lhs = std::max(sup_lhs, lq_norm(grad(s.rho), q));
    const double rhs = std::exp(2.0 * int_div) * (g0 + int_w2q);
    out.push_back(sup_lhs == 0.0 ? 0.0 : sup_lhs / rhs);
  }
  return out;
}

double gn_ratio(const VectorField& u, double p, double q, std::optional<double> alpha) {
  if (!(u.max_abs() > 0.0)) throw MonitorError("gn_ratio: zero field");
  const double amax = 2.0 * (1.0 - 1.0 / p);
  const double a = alpha.value_or(0.5 * amax);
  if (!(a > 0.0 && a < amax)) {
    std::ostringstream os;
    os << "gn_ratio: alpha = " << a << " must lie in (0, " << amax << ")";
    throw MonitorError(os.str());
  }
  const double s = 1.0 + 0.5 * a;
  double ws = 0.0, wa = 0.0;
  for (int c = 0; c < u.dim(); ++c) {
    ws += besov_modulus_norm(u[c], s, q, q);
    wa += besov_modulus_norm(u[c], a, q, q);
  }
  return ws / std::sqrt(wa * sobolev_norm(u, 2, q));
}

double CompatibilityReport::max() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.second);
  return m;
}

double CompatibilityReport::value(const std::string& label) const {
  for (const auto& e : entries)
    if (e.first == label) return e.second;
  throw MonitorError("no compatibility entry named " + label);
}

CompatibilityReport compatibility_residuals(const ScalarField& rho0, const ScalarField& theta0,
                                            const VectorField& u0, const BoundaryData& bd,
                                            const FluidParams& params) {
  const Grid& g = rho0.grid();
  const int d = g.dim();
  double r_u = 0.0, r_theta = 0.0, r_q = 0.0, r_mom = 0.0, r_heat = 0.0, r_heat_n = 0.0;

  // initial accelerations, with one-sided derivatives on walls
  const TensorField gu = grad_tensor(u0);
  const TensorField S = stress(gu, params);
  const ScalarField G = potential_or_zero(params, g);
  const ScalarField p = pressure(rho0, theta0);
  VectorField acc(g);
  for (int a = 0; a < d; ++a) {
    ScalarField divS(g);
    for (int b = 0; b < d; ++b) divS += partial(S(a, b), b);
    const ScalarField adv = advect(u0, u0[a]);
    const ScalarField dp = partial(p, a), dG = partial(G, a);
    for (std::size_t n = 0; n < g.size(); ++n)
      acc[a][n] = -adv[n] - dp[n] / rho0[n] + divS[n] / rho0[n] + dG[n];
  }
  ScalarField lap(g);
  for (int a = 0; a < d; ++a) lap += second_partial(theta0, a, a);
  const ScalarField diss = dissipation(gu, params);
  const ScalarField divu = gu.trace();
  const ScalarField adv = advect(u0, theta0);
  ScalarField rate(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double cr = params.cv * rho0[n];
    rate[n] = -adv[n] + params.kappa * lap[n] / cr + diss[n] / cr - theta0[n] * divu[n] / params.cv;
  }

  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    const bool dirichlet = g.temperature_bc(f) == TempBc::dirichlet;
    const std::vector<double> dn = normal_derivative(theta0, f);
    const std::vector<double> dn_rate = normal_derivative(rate, f);
    for (std::size_t n : g.face_nodes(f)) {
      const auto t = static_cast<std::size_t>(g.tangential_index(f, n));
      double du = 0.0, am = 0.0;
      for (int a = 0; a < d; ++a) {
        du += std::pow(u0[a][n] - bd.u_B[a][k][t], 2);
        am += acc[a][n] * acc[a][n];
      }
      r_u = std::max(r_u, std::sqrt(du));
      r_mom = std::max(r_mom, std::sqrt(am));
      if (dirichlet) {
        r_theta = std::max(r_theta, std::abs(theta0[n] - bd.theta_B[k][t]));
        r_heat = std::max(r_heat, std::abs(rate[n]));
      } else if (!g.on_dirichlet(n)) {
        r_q = std::max(r_q, std::abs(dn[t] - bd.q_B[k][t]));
        r_heat_n = std::max(r_heat_n, std::abs(dn_rate[t]));
      }
    }
  }
  CompatibilityReport rep;
  rep.entries = {{"u0-u_B", r_u},          {"theta0-theta_B", r_theta},
                 {"dn_theta0-q_B", r_q},   {"momentum_rate", r_mom},
                 {"temperature_rate", r_heat}, {"dn_temperature_rate", r_heat_n}};
  return rep;
}

std::vector<unsigned> blowup_flag(const std::vector<DiagnosticsRecord>& records,
                                  const MonitorConfig& cfg, double M) {
  std::vector<unsigned> out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    unsigned f = blowup_at(records, k, cfg);
    if (records[k].control_F >= M) f |= HittingTime;
    out.push_back(f);
  }
  return out;
}

Monitor::Monitor(MonitorConfig cfg, FluidParams params, BoundaryData bd, std::optional<Forcing> forcing)
    : cfg_(std::move(cfg)), params_(std::move(params)), bd_(std::move(bd)), forcing_(std::move(forcing)) {
  cfg_.validate();
  require_u_ext(bd_);
  require_theta_ext(bd_);
}

const DiagnosticsRecord& Monitor::observe(const State& s) {
  const Grid& g = s.grid();
  DiagnosticsRecord r;
  r.step = static_cast<int>(records_.size());
  r.t = s.t;
  r.amplitude = amplitude_of(s);
  r.w1inf = w1inf_of(s);
  const double dsup = div_sup(s.u);
  const double w2q = sobolev_norm(s.u, 2, cfg_.q);
  const double grad_rho = lq_norm(grad(s.rho), cfg_.q);

  if (!prev_) {
    rho0_min_ = s.rho.min();
    theta_enabled_ = bd_.q_nonnegative(g);
    if (!theta_enabled_) warning_ = "temperature minimum check disabled: q_B < 0 somewhere on Gamma_N";
    theta_floor_ = std::min(s.theta.min(), bd_.min_theta_B(g));
    grad_rho0_ = grad_rho;
    M_ = cfg_.M.value_or(2.0 * r.amplitude + 1.0);
  } else {
    const double dt = s.t - prev_->t;
    if (!(dt > 0.0)) throw MonitorError("monitor: times must increase");
    int_div_ += 0.5 * dt * (prev_div_ + dsup);
    int_control_ += 0.5 * dt * (std::pow(prev_w1inf_, cfg_.p) + std::pow(r.w1inf, cfg_.p));
    int_w2q_ += 0.5 * dt * (prev_w2q_ + w2q);
    r.energy_residual_momentum = momentum_interval(*prev_, s, *bd_.u_ext, params_, forcing_);
    r.energy_residual_heat = heat_interval(*prev_, s, *bd_.theta_ext, params_, forcing_);
  }
  prev_div_ = dsup;
  prev_w1inf_ = r.w1inf;
  prev_w2q_ = w2q;
  sup_grad_rho_ = std::max(sup_grad_rho_, grad_rho);

  r.control_F = r.amplitude + int_control_;
  r.rho_min = s.rho.min();
  r.rho_bound = rho0_min_ * std::exp(-int_div_);
  r.theta_min = s.theta.min();
  r.theta_bound = theta_enabled_ ? theta_floor_ * std::exp(-int_div_ / params_.cv) : 0.0;
  if (!min_ok(r.rho_min, r.rho_bound, cfg_.min_tol) || !min_ok(r.theta_min, r.theta_bound, cfg_.min_tol))
    r.flags |= PositivityLoss;

  const VectorField w = s.u - *bd_.u_ext;
  r.korn_ratio = w.max_abs() > 0.0 ? korn_ratio(w, params_) : 0.0;
  const double rhs = std::exp(2.0 * int_div_) * (grad_rho0_ + int_w2q_);
  r.grad_rho_ratio = sup_grad_rho_ == 0.0 ? 0.0 : sup_grad_rho_ / rhs;
  if (cfg_.gn_every > 0 && r.step % cfg_.gn_every == 0)
    last_gn_ = s.u.max_abs() > 0.0 ? gn_ratio(s.u, cfg_.p, cfg_.q) : 0.0;
  r.gn_ratio = last_gn_;
  r.mass = total_mass(s.rho);

  if (r.control_F >= M_) {
    r.flags |= HittingTime;
    if (!T_M_) {
      T_M_ = records_.empty() ? r.t
                              : hitting_time({records_.back().t, r.t},
                                             {records_.back().control_F, r.control_F}, M_)
                                    .T_M;
    }
  }
  records_.push_back(r);
  records_.back().flags |= blowup_at(records_, records_.size() - 1, cfg_);
  prev_ = s;
  return records_.back();
}

bool Monitor::should_stop() const {
  if (records_.empty()) return false;
  const unsigned f = records_.back().flags;
  return ((f & HittingTime) && cfg_.stop_on_hitting) || ((f & BlowupSuspected) && cfg_.stop_on_blowup) ||
         ((f & PositivityLoss) && cfg_.strict);
}

std::string summary_json(const Monitor& m, const State& final_state, const std::string& end_cause) {
  using nlohmann::json;
  json j;
  j["end"] = end_cause;
  j["M"] = m.M();
  j["T_M"] = m.T_M() ? json(*m.T_M()) : json(nullptr);
  unsigned seen = 0;
  for (const DiagnosticsRecord& r : m.records()) seen |= r.flags;
  json flags = json::array();
  for (unsigned f : {HittingTime, PositivityLoss, BlowupSuspected})
    if (seen & f) flags.push_back(flag_names(f));
  j["flags"] = flags;
  j["temperature_check_enabled"] = m.temperature_check_enabled();
  if (!m.warning().empty()) j["warning"] = m.warning();
  j["steps"] = m.records().empty() ? 0 : m.records().back().step;
  if (!m.records().empty()) {
    const DiagnosticsRecord& r = m.records().back();
    j["final_record"] = {{"t", r.t},
                         {"amplitude", r.amplitude},
                         {"w1inf", r.w1inf},
                         {"control_F", r.control_F},
                         {"rho_min", r.rho_min},
                         {"theta_min", r.theta_min},
                         {"mass", r.mass}};
    double max_res_m = 0.0, max_res_h = 0.0;
    for (const DiagnosticsRecord& x : m.records()) {
      max_res_m = std::max(max_res_m, std::abs(x.energy_residual_momentum));
      max_res_h = std::max(max_res_h, std::abs(x.energy_residual_heat));
    }
    j["max_energy_residual_momentum"] = max_res_m;
    j["max_energy_residual_heat"] = max_res_h;
  }
  j["final_norms"] = {{"t", final_state.t},
                      {"rho_L2", lq_norm(final_state.rho, 2.0)},
                      {"theta_L2", lq_norm(final_state.theta, 2.0)},
                      {"u_L2", lq_norm(final_state.u, 2.0)},
                      {"sup", sup_norm(components(final_state))}};
  return j.dump(2);
}

}  // namespace nsf
