#include "nsf/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nsf/operators.hpp"
#include "nsf/transport.hpp"

namespace nsf {

std::string exponent_violation(double p, double q) {
  std::ostringstream os;
  if (!(q > 3.0) || !std::isfinite(q)) {
    os << "exponent q = " << q << " violates LEa1: 3 < q < inf is required";
    return os.str();
  }
  const double pmin = 2.0 * q / (2.0 * q - 3.0);
  if (!(p > pmin) || !std::isfinite(p)) {
    os << "exponent p = " << p << " violates LEa1: p must exceed 2q/(2q-3) = " << pmin;
    return os.str();
  }
  return {};
}

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("stepper: t_end must be non-negative");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw std::invalid_argument("stepper: cfl_safety must lie in (0, 1]");
  if (const std::string v = exponent_violation(p, q); !v.empty()) throw std::invalid_argument(v);
}

double select_dt(const State& s, const StepperConfig& cfg) {
  const Grid& g = s.grid();
  double dt = cfg.dt;
  if (cfg.fixed_dt) return dt;
  const ScalarField speed = s.u.magnitude();
  double wave = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) wave = std::max(wave, speed[n] + std::sqrt(s.theta[n]));
  if (wave > 0.0) dt = std::min(dt, cfg.cfl_safety * g.min_spacing() / wave);
  const double c = cfl_number(s.u, 1.0);
  if (c > 0.0) dt = std::min(dt, 0.5 / c);
  return dt;
}

void validate_state(const State& s, const BoundaryData& bd) {
  const Grid& g = s.grid();
  auto fail = [&](const std::string& what, std::size_t n) {
    std::ostringstream os;
    os << what << " at node (" << g.ix(n) << ", " << g.iy(n) << "), t = " << s.t;
    throw StepError(StepFailure::invalid_state, os.str());
  };
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!(s.rho[n] > 0.0)) fail("density is not positive", n);
    if (!(s.theta[n] > 0.0)) fail("temperature is not positive", n);
  }
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    for (std::size_t n : g.face_nodes(f)) {
      const auto t = static_cast<std::size_t>(g.tangential_index(f, n));
      for (int a = 0; a < g.dim(); ++a)
        if (std::abs(s.u[a][n] - bd.u_B[a][k][t]) > 1e-12 * (1.0 + std::abs(bd.u_B[a][k][t])))
          fail("velocity trace differs from u_B", n);
    }
  }
}

namespace {

std::string where(const Grid& g, std::size_t n) {
  std::ostringstream os;
  os << "(" << g.ix(n) << ", " << g.iy(n) << ")";
  return os.str();
}

}  // namespace

State step(const State& s, const FluidParams& params, const BoundaryData& bd,
           const StepperConfig& cfg, double dt) {
  const Grid& g = s.grid();
  const int d = g.dim();
  const double t1 = s.t + dt;

  State out;
  out.t = t1;

  // continuity
  try {
    out.rho = advance_density(s.rho, s.u, dt);
  } catch (const TransportError& e) {
    const bool cfl = std::string(e.what()).find("CFL") != std::string::npos;
    throw StepError(cfl ? StepFailure::cfl : StepFailure::positivity, e.what());
  }
  if (cfg.forcing) {
    for (std::size_t n = 0; n < g.size(); ++n) out.rho[n] += dt * (*cfg.forcing)(s.t, g.x(n), g.y(n)).rho;
  }
  for (std::size_t n = 0; n < g.size(); ++n)
    if (!(out.rho[n] > 0.0))
      throw StepError(StepFailure::positivity, "density lost positivity at node " + where(g, n));

  // momentum: rho (u1 - u) / dt - div S(u1) = rho E
  const ScalarField log_rho = s.rho.map([](double r) { return std::log(r); });
  std::vector<PointSource> src;
  if (cfg.forcing) {
    src.reserve(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) src.push_back((*cfg.forcing)(t1, g.x(n), g.y(n)));
  }
  ScalarField mass(g);
  for (std::size_t n = 0; n < g.size(); ++n) mass[n] = s.rho[n] / dt;
  LameProblem mp{mass, params.mu, params.lambda, VectorField(g), bd.wall_velocity(g)};
  for (int a = 0; a < d; ++a) {
    const ScalarField adv = advect(s.u, s.u[a]);
    const ScalarField dlr = partial(log_rho, a);
    const ScalarField dth = partial(s.theta, a);
    const ScalarField dG = params.G.size() == g.size() ? partial(params.G, a) : ScalarField(g);
    ScalarField& r = mp.rhs[a];
    for (std::size_t n = 0; n < g.size(); ++n) {
      double e = -adv[n] - s.theta[n] * dlr[n] - dth[n] + dG[n];
      if (cfg.forcing) e += src[n].u[static_cast<std::size_t>(a)];
      r[n] = mass[n] * s.u[a][n] + s.rho[n] * e;
    }
  }
  try {
    out.u = solve_lame(mp, &s.u, cfg.solver);
  } catch (const SolverError& e) {
    throw StepError(StepFailure::solver, std::string("momentum solve: ") + e.what());
  }

  // heat: cv rho (th1 - th) / dt - kappa Lap th1 = cv rho E
  const TensorField gu = grad_tensor(out.u);
  const ScalarField diss = dissipation(gu, params);
  const ScalarField divu = gu.trace();
  const ScalarField adv = advect(out.u, s.theta);
  ScalarEllipticProblem hp;
  hp.mass = ScalarField(g);
  hp.coeff = ScalarField(g, params.kappa);
  hp.rhs = ScalarField(g);
  hp.closure = bd.temperature_closure(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double cr = params.cv * s.rho[n];
    double e = -adv[n] + diss[n] / cr - s.theta[n] * divu[n] / params.cv;
    if (cfg.forcing) e += src[n].theta;
    (*hp.mass)[n] = cr / dt;
    hp.rhs[n] = (*hp.mass)[n] * s.theta[n] + cr * e;
  }
  try {
    out.theta = solve_scalar_elliptic(hp, &s.theta, cfg.solver);
  } catch (const SolverError& e) {
    throw StepError(StepFailure::solver, std::string("heat solve: ") + e.what());
  }
  for (std::size_t n = 0; n < g.size(); ++n)
    if (!(out.theta[n] > 0.0))
      throw StepError(StepFailure::positivity, "temperature lost positivity at node " + where(g, n));
  if (!out.u.all_finite() || !out.theta.all_finite())
    throw StepError(StepFailure::invalid_state, "non-finite values after step");
  validate_state(out, bd);
  return out;
}

State step(const State& s, const FluidParams& params, const BoundaryData& bd,
           const StepperConfig& cfg) {
  const double dt = std::min(select_dt(s, cfg), cfg.t_end - s.t);
  if (!(dt > 0.0)) throw StepError(StepFailure::invalid_state, "no time left before t_end");
  return step(s, params, bd, cfg, dt);
}

RunResult run(const State& initial, const FluidParams& params, const BoundaryData& bd,
              const StepperConfig& cfg, const StepObserver& observer) {
  cfg.validate();
  validate_state(initial, bd);
  RunResult res{initial, 0, RunEnd::completed};
  if (observer && !observer(res.final_state, 0)) {
    res.end = RunEnd::stopped;
    return res;
  }
  // guard against a final sliver far below round-off of t_end
  const double eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  while (res.final_state.t < cfg.t_end - eps) {
    double dt = select_dt(res.final_state, cfg);
    if (res.final_state.t + dt > cfg.t_end - eps) dt = cfg.t_end - res.final_state.t;
    try {
      res.final_state = step(res.final_state, params, bd, cfg, dt);
    } catch (const StepError& e) {
      throw StepError(e.kind(), "step " + std::to_string(res.steps + 1) + ": " + e.what());
    }
    ++res.steps;
    if (observer && !observer(res.final_state, res.steps)) {
      res.end = RunEnd::stopped;
      break;
    }
  }
  return res;
}

}  // namespace nsf
