#include "nsf/harness.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nsf/elliptic.hpp"
#include "nsf/extension.hpp"
#include "nsf/mms.hpp"
#include "nsf/operators.hpp"
#include "nsf/snapshot.hpp"

namespace fs = std::filesystem;

namespace nsf {

int exit_code(ExitCause c) {
  switch (c) {
    case ExitCause::completed: return 0;
    case ExitCause::hitting_time: return 2;
    case ExitCause::blowup: return 3;
    case ExitCause::positivity_loss: return 4;
    case ExitCause::compatibility: return 5;
    case ExitCause::solver_failure: return 6;
    case ExitCause::order_not_attained: return 7;
    case ExitCause::extension_failure: return 8;
  }
  return 1;
}

std::string cause_name(ExitCause c) {
  switch (c) {
    case ExitCause::completed: return "completed";
    case ExitCause::hitting_time: return "hitting-time";
    case ExitCause::blowup: return "blow-up";
    case ExitCause::positivity_loss: return "positivity-loss";
    case ExitCause::compatibility: return "compatibility";
    case ExitCause::solver_failure: return "solver-failure";
    case ExitCause::order_not_attained: return "order-not-attained";
    case ExitCause::extension_failure: return "extension-failure";
  }
  return "unknown";
}

namespace {

Forcing with_inconsistency(Forcing f, double c) {
  if (c == 0.0) return f;
  return [f = std::move(f), c](double t, double x, double y) {
    PointSource s = f(t, x, y);
    s.theta += c;
    return s;
  };
}

Problem manufactured_problem(const RunConfig& cfg, int n) {
  const int dim = cfg.grid.dim;
  const Manufactured m = Manufactured::family(cfg.mms.family, dim);
  Problem pb;
  pb.grid = Grid::build(Manufactured::smooth_grid(dim, n));
  pb.params = cfg.fluid_params(pb.grid);
  pb.params.G = m.potential(pb.grid);
  pb.bd = m.boundary_data(pb.grid);
  const double h = pb.grid.min_spacing();
  pb.stepper = cfg.stepper;
  pb.stepper.dt = cfg.mms.dt_factor * h * h;
  pb.stepper.fixed_dt = true;
  pb.stepper.forcing = with_inconsistency(mms_forcing(m, pb.params, dim), cfg.mms.inconsistency);
  std::vector<double> times;
  for (int k = 0; k <= 8; ++k) times.push_back(cfg.stepper.t_end * k / 8);
  m.check_compatibility(pb.grid, times);
  pb.initial = m.state(pb.grid, 0.0);
  attach_extensions(pb.grid, pb.bd, pb.params, pb.initial.theta, pb.stepper.solver);
  return pb;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string snapshot_name(int step) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(6) << std::setfill('0') << step << ".bin";
  return os.str();
}

void write_state(const fs::path& p, const State& s) {
  std::vector<const ScalarField*> f{&s.rho, &s.theta};
  for (int a = 0; a < s.u.dim(); ++a) f.push_back(&s.u[a]);
  write_snapshot(p, f);
}

}  // namespace

Problem build_problem(const RunConfig& cfg, int n) {
  if (cfg.data.manufactured || cfg.mode == Mode::mms_verify)
    return manufactured_problem(cfg, n > 0 ? n : cfg.grid.counts[0]);
  Problem pb;
  pb.grid = cfg.make_grid();
  pb.params = cfg.fluid_params(pb.grid);
  pb.bd = cfg.boundary_data(pb.grid);
  pb.stepper = cfg.stepper;
  // the temperature extension only reads theta0 when Gamma_D is empty
  const ScalarField theta0 =
      cfg.data.theta0_from_extension
          ? ScalarField(pb.grid, 1.0)
          : ScalarField::sample(pb.grid, [&](double x, double y) { return cfg.data.theta0(x, y); });
  attach_extensions(pb.grid, pb.bd, pb.params, theta0, pb.stepper.solver);
  pb.initial = cfg.initial_state(pb.grid, pb.bd);
  return pb;
}

SimulationResult run_simulation(const RunConfig& cfg, const fs::path& out_dir, std::ostream* log) {
  fs::create_directories(out_dir);
  SimulationResult res;
  Problem pb;
  try {
    pb = build_problem(cfg);
  } catch (const ExtensionError& e) {
    res.cause = ExitCause::extension_failure;
    res.message = e.what();
    return res;
  }
  res.final_state = pb.initial;

  res.compatibility = compatibility_residuals(pb.initial.rho, pb.initial.theta, pb.initial.u, pb.bd, pb.params);
  std::vector<std::string> gate;
  auto check = [&](const std::string& label, double tol) {
    const double v = res.compatibility.value(label);
    if (v > tol) {
      std::ostringstream os;
      os << label << " = " << v << " exceeds " << tol;
      gate.push_back(os.str());
    }
  };
  check("u0-u_B", cfg.compatibility_tol);
  check("theta0-theta_B", cfg.compatibility_tol);
  check("dn_theta0-q_B", cfg.compatibility_flux_tol);
  if (cfg.compatibility_first_order_tol) {
    check("momentum_rate", *cfg.compatibility_first_order_tol);
    check("temperature_rate", *cfg.compatibility_first_order_tol);
    check("dn_temperature_rate", *cfg.compatibility_first_order_tol);
  }
  if (!gate.empty()) {
    res.cause = ExitCause::compatibility;
    res.message = "compatibility gate: ";
    for (std::size_t k = 0; k < gate.size(); ++k) res.message += (k ? "; " : "") + gate[k];
    return res;
  }

  Monitor mon(cfg.monitor, pb.params, pb.bd, pb.stepper.forcing);
  std::ofstream csv(out_dir / "diagnostics.csv");
  if (!csv) throw std::runtime_error("cannot write " + (out_dir / "diagnostics.csv").string());
  csv << csv_header() << '\n';
  for (const std::string& w : cfg.warnings)
    if (log) *log << "warning: " << w << '\n';

  bool stopped = false;
  try {
    const RunResult rr = run(pb.initial, pb.params, pb.bd, pb.stepper, [&](const State& s, int k) {
      const DiagnosticsRecord& r = mon.observe(s);
      csv << csv_row(r) << '\n';
      if (cfg.output.snapshot_every > 0 && k % cfg.output.snapshot_every == 0)
        write_state(out_dir / snapshot_name(k), s);
      res.final_state = s;
      res.steps = k;
      return !mon.should_stop();
    });
    stopped = rr.end == RunEnd::stopped;
  } catch (const StepError& e) {
    res.cause = ExitCause::solver_failure;
    res.message = e.what();
  }
  if (stopped) {
    const unsigned f = mon.records().back().flags;
    if ((f & HittingTime) && cfg.monitor.stop_on_hitting) res.cause = ExitCause::hitting_time;
    else if ((f & BlowupSuspected) && cfg.monitor.stop_on_blowup) res.cause = ExitCause::blowup;
    else res.cause = ExitCause::positivity_loss;
  }
  res.T_M = mon.T_M();
  res.records = mon.records();
  csv.close();

  auto j = nlohmann::json::parse(summary_json(mon, res.final_state, cause_name(res.cause)));
  if (!res.message.empty()) j["message"] = res.message;
  for (const auto& [label, v] : res.compatibility.entries) j["compatibility"][label] = v;
  if (!cfg.warnings.empty()) j["config_warnings"] = cfg.warnings;
  write_text(out_dir / "summary.json", j.dump(2) + "\n");
  if (log) *log << cause_name(res.cause) << " after " << res.steps << " steps, t = " << res.final_state.t << '\n';
  return res;
}

MmsResult mms_verify(const RunConfig& cfg, int levels, const fs::path& out_dir) {
  if (levels < 2) throw std::invalid_argument("mms_verify needs at least two levels");
  const Manufactured m = Manufactured::family(cfg.mms.family, cfg.grid.dim);
  std::vector<std::future<MmsLevel>> jobs;
  for (int l = 0; l < levels; ++l) {
    const int n = cfg.grid.counts[0] << l;
    jobs.push_back(std::async(std::launch::async, [&cfg, &m, n] {
      const Problem pb = manufactured_problem(cfg, n);
      const RunResult rr = run(pb.initial, pb.params, pb.bd, pb.stepper);
      const State ex = m.state(pb.grid, rr.final_state.t);
      MmsLevel lv;
      lv.n = n;
      lv.h = pb.grid.min_spacing();
      lv.dt = pb.stepper.dt;
      lv.steps = rr.steps;
      lv.err_rho = (rr.final_state.rho - ex.rho).max_abs();
      lv.err_theta = (rr.final_state.theta - ex.theta).max_abs();
      lv.err_u = (rr.final_state.u - ex.u).max_abs();
      return lv;
    }));
  }
  MmsResult res;
  for (auto& j : jobs) res.levels.push_back(j.get());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto order = [&](double coarse, double fine, double ratio) {
    if (coarse < mms_noise_floor) return nan;
    return std::log(coarse / fine) / std::log(ratio);
  };
  for (std::size_t l = 0; l < res.levels.size(); ++l) {
    MmsLevel& lv = res.levels[l];
    if (l == 0) {
      lv.order_rho = lv.order_theta = lv.order_u = nan;
      continue;
    }
    const MmsLevel& c = res.levels[l - 1];
    const double ratio = c.h / lv.h;
    lv.order_rho = order(c.err_rho, lv.err_rho, ratio);
    lv.order_theta = order(c.err_theta, lv.err_theta, ratio);
    lv.order_u = order(c.err_u, lv.err_u, ratio);
  }
  const MmsLevel& fine = res.levels.back();
  std::ostringstream msg;
  auto assess = [&](const char* name, double o, double expected) {
    const double need = expected - cfg.mms.order_tol;
    if (std::isnan(o) || o >= need) return;
    res.attained = false;
    msg << name << " order " << o << " below " << need << "; ";
  };
  assess("rho", fine.order_rho, cfg.mms.expected_density_order);
  assess("theta", fine.order_theta, cfg.mms.expected_order);
  assess("u", fine.order_u, cfg.mms.expected_order);
  res.message = res.attained ? "declared order attained" : msg.str();

  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "mms_convergence.csv");
  if (!csv) throw std::runtime_error("cannot write " + (out_dir / "mms_convergence.csv").string());
  csv << std::setprecision(10);
  csv << "level,n,h,dt,steps,err_rho,err_theta,err_u,order_rho,order_theta,order_u\n";
  for (std::size_t l = 0; l < res.levels.size(); ++l) {
    const MmsLevel& lv = res.levels[l];
    csv << l << ',' << lv.n << ',' << lv.h << ',' << lv.dt << ',' << lv.steps << ',' << lv.err_rho << ','
        << lv.err_theta << ',' << lv.err_u << ',' << lv.order_rho << ',' << lv.order_theta << ','
        << lv.order_u << '\n';
  }
  return res;
}

ExtensionReport extension_test(const RunConfig& cfg, const fs::path& out_dir) {
  ExtensionReport rep;
  const Problem pb = build_problem(cfg);
  const Grid& g = pb.grid;
  const BoundaryData& bd = pb.bd;
  const ScalarField& th = *bd.theta_ext;
  const VectorField& u = *bd.u_ext;
  auto interior = [&](std::size_t n) {
    for (int a = 0; a < g.dim(); ++a) {
      if (g.periodic(a)) continue;
      const int i = a == 0 ? g.ix(n) : g.iy(n);
      if (i == 0 || i == g.nodes(a) - 1) return false;
    }
    return true;
  };
  const ScalarField lap = laplacian(th, bd.temperature_closure(g));
  const VectorField lame = lame_operator(u, pb.params.mu, pb.params.lambda);
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!interior(n)) continue;
    rep.laplace_residual = std::max(rep.laplace_residual, std::abs(lap[n]));
    for (int a = 0; a < g.dim(); ++a) rep.lame_residual = std::max(rep.lame_residual, std::abs(lame[a][n]));
  }
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    const std::vector<double> dn = normal_derivative(th, f);
    for (std::size_t n : g.face_nodes(f)) {
      const auto t = static_cast<std::size_t>(g.tangential_index(f, n));
      for (int a = 0; a < g.dim(); ++a)
        rep.wall_residual = std::max(rep.wall_residual, std::abs(u[a][n] - bd.u_B[a][k][t]));
      if (g.temperature_bc(f) == TempBc::dirichlet)
        rep.dirichlet_residual = std::max(rep.dirichlet_residual, std::abs(th[n] - bd.theta_B[k][t]));
      else if (!g.on_dirichlet(n))
        rep.neumann_residual = std::max(rep.neumann_residual, std::abs(dn[t] - bd.q_B[k][t]));
    }
  }
  rep.theta_min = th.min();
  // interior residuals are relative to the solver tolerance scaled by 1/h^2
  const double h2 = g.min_spacing() * g.min_spacing();
  rep.ok = rep.laplace_residual * h2 < 1e-6 && rep.lame_residual * h2 < 1e-6 && rep.dirichlet_residual < 1e-12 &&
           rep.wall_residual < 1e-12 && rep.neumann_residual < cfg.compatibility_flux_tol && rep.theta_min > 0.0;

  nlohmann::json j{{"laplace_residual", rep.laplace_residual},
                   {"dirichlet_residual", rep.dirichlet_residual},
                   {"neumann_residual", rep.neumann_residual},
                   {"lame_residual", rep.lame_residual},
                   {"wall_residual", rep.wall_residual},
                   {"theta_min", rep.theta_min},
                   {"ok", rep.ok}};
  fs::create_directories(out_dir);
  write_text(out_dir / "extension.json", j.dump(2) + "\n");
  return rep;
}

}  // namespace nsf
