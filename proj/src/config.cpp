#include "nsf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nsf/extension.hpp"

namespace nsf {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : "\n") + s;
  return out;
}

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

// Collects problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void error(const YAML::Node& n, const std::string& what) {
    std::ostringstream os;
    if (n.Mark().line >= 0) os << "line " << line_of(n) << ": ";
    os << what;
    problems.push_back(os.str());
  }

  void check_keys(const YAML::Node& sec, const std::string& name, const std::set<std::string>& known) {
    if (!sec) return;
    if (!sec.IsMap()) {
      error(sec, "section '" + name + "' must be a mapping");
      return;
    }
    for (const auto& kv : sec) {
      const std::string key = kv.first.as<std::string>();
      if (!known.count(key)) error(kv.first, "unknown key '" + name + "." + key + "'");
    }
  }

  template <class T>
  void get(const YAML::Node& sec, const std::string& key, T& out, const char* type) {
    if (!sec || !sec.IsMap() || !sec[key]) return;
    const YAML::Node n = sec[key];
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      error(n, "'" + key + "' must be " + type);
    }
  }

  void get_number(const YAML::Node& sec, const std::string& key, double& out) {
    get(sec, key, out, "a number");
  }

  void get_expr(const YAML::Node& sec, const std::string& key, Expression& out) {
    if (!sec || !sec.IsMap() || !sec[key]) return;
    parse_expr(sec[key], key, out);
  }

  void parse_expr(const YAML::Node& n, const std::string& key, Expression& out) {
    if (!n.IsScalar()) {
      error(n, "'" + key + "' must be an expression");
      return;
    }
    try {
      out = Expression::parse(n.as<std::string>());
    } catch (const ExpressionError& e) {
      error(n, key + ": " + e.what());
    }
  }

  // Two expressions, or one in 1D.
  void get_vector(const YAML::Node& sec, const std::string& key, std::array<Expression, 2>& out) {
    if (!sec || !sec.IsMap() || !sec[key]) return;
    const YAML::Node n = sec[key];
    if (n.IsScalar()) {
      parse_expr(n, key, out[0]);
      return;
    }
    if (!n.IsSequence() || n.size() < 1 || n.size() > 2) {
      error(n, "'" + key + "' must be one expression or a list of two");
      return;
    }
    for (std::size_t i = 0; i < n.size(); ++i) parse_expr(n[i], key, out[i]);
  }

  template <class T>
  void get_pair(const YAML::Node& sec, const std::string& key, std::array<T, 2>& out, const char* type) {
    if (!sec || !sec.IsMap() || !sec[key]) return;
    const YAML::Node n = sec[key];
    try {
      if (n.IsScalar()) {
        out[0] = out[1] = n.as<T>();
      } else if (n.IsSequence() && n.size() >= 1 && n.size() <= 2) {
        out[0] = n[0].as<T>();
        out[1] = n.size() > 1 ? n[1].as<T>() : out[0];
      } else {
        error(n, "'" + key + "' must be " + type + " or a list of two");
      }
    } catch (const YAML::Exception&) {
      error(n, "'" + key + "' must be " + type + " or a list of two");
    }
  }
};

Topology topology_of(const std::string& s, bool& ok) {
  ok = s == "walled" || s == "periodic";
  return s == "periodic" ? Topology::periodic : Topology::walled;
}

void read_grid(Reader& r, const YAML::Node& sec, GridSpec& g) {
  r.check_keys(sec, "grid", {"dim", "extents", "counts", "topology", "temperature"});
  r.get(sec, "dim", g.dim, "1 or 2");
  r.get_pair(sec, "extents", g.extents, "a number");
  r.get_pair(sec, "counts", g.counts, "an integer");
  if (sec && sec.IsMap() && sec["topology"]) {
    std::array<std::string, 2> t{"walled", "walled"};
    r.get_pair(sec, "topology", t, "walled or periodic");
    for (int a = 0; a < 2; ++a) {
      bool ok = true;
      g.topology[a] = topology_of(t[a], ok);
      if (!ok) r.error(sec["topology"], "topology must be walled or periodic, got '" + t[a] + "'");
    }
  }
  if (sec && sec.IsMap() && sec["temperature"]) {
    const YAML::Node t = sec["temperature"];
    r.check_keys(t, "grid.temperature", {"x_lo", "x_hi", "y_lo", "y_hi"});
    if (t.IsMap()) {
      for (Face f : all_faces) {
        const YAML::Node n = t[face_name(f)];
        if (!n) continue;
        const std::string v = n.as<std::string>();
        if (v == "dirichlet") g.temperature[static_cast<int>(f)] = TempBc::dirichlet;
        else if (v == "neumann") g.temperature[static_cast<int>(f)] = TempBc::neumann;
        else r.error(n, "temperature tag must be dirichlet or neumann, got '" + v + "'");
      }
    }
  }
  if (g.dim == 1) {
    g.counts[1] = 0;
    g.topology[1] = Topology::walled;
  }
}

void read_data(Reader& r, const YAML::Node& sec, DataBlock& d) {
  if (sec && sec.IsScalar()) {
    if (sec.as<std::string>() == "manufactured") d.manufactured = true;
    else r.error(sec, "data must be a mapping or 'manufactured'");
    return;
  }
  r.check_keys(sec, "data", {"rho0", "theta0", "u0", "theta_B", "u_B", "q_B"});
  r.get_expr(sec, "rho0", d.rho0);
  auto from_extension = [&](const char* key) {
    return sec && sec.IsMap() && sec[key] && sec[key].IsScalar() && sec[key].as<std::string>() == "extension";
  };
  d.theta0_from_extension = from_extension("theta0");
  if (!d.theta0_from_extension) r.get_expr(sec, "theta0", d.theta0);
  d.u0_from_extension = from_extension("u0");
  if (!d.u0_from_extension) r.get_vector(sec, "u0", d.u0);
  r.get_expr(sec, "theta_B", d.theta_B);
  r.get_vector(sec, "u_B", d.u_B);
  r.get_expr(sec, "q_B", d.q_B);
}

void read_monitor(Reader& r, const YAML::Node& sec, MonitorConfig& m) {
  r.check_keys(sec, "monitor", {"M", "p", "q", "min_tol", "blowup_amplitude", "blowup_rate",
                                "blowup_window", "gn_every", "stop_on_hitting", "stop_on_blowup",
                                "strict"});
  if (sec && sec.IsMap() && sec["M"]) {
    const YAML::Node n = sec["M"];
    if (n.IsScalar() && n.as<std::string>() == "auto") {
      m.M.reset();
    } else {
      double v = 0.0;
      r.get_number(sec, "M", v);
      m.M = v;
    }
  }
  r.get_number(sec, "p", m.p);
  r.get_number(sec, "q", m.q);
  r.get_number(sec, "min_tol", m.min_tol);
  r.get_number(sec, "blowup_amplitude", m.blowup_amplitude);
  r.get_number(sec, "blowup_rate", m.blowup_rate);
  r.get(sec, "blowup_window", m.blowup_window, "an integer");
  r.get(sec, "gn_every", m.gn_every, "an integer");
  r.get(sec, "stop_on_hitting", m.stop_on_hitting, "true or false");
  r.get(sec, "stop_on_blowup", m.stop_on_blowup, "true or false");
  r.get(sec, "strict", m.strict, "true or false");
}

void sample_check(std::vector<std::string>& out, const Grid& g, const Expression& e, const char* what,
                  const char* tag) {
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double v = e(g.x(n), g.y(n));
    if (!std::isfinite(v) || !(v > 0.0)) {
      std::ostringstream os;
      os << what << " must be positive (" << tag << "): " << what << " = " << v << " at node (" << g.ix(n)
         << ", " << g.iy(n) << ")";
      out.push_back(os.str());
      return;
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

Grid RunConfig::make_grid() const { return Grid::build(grid); }

FluidParams RunConfig::fluid_params(const Grid& g) const {
  FluidParams p;
  p.mu = fluid.mu;
  p.lambda = fluid.lambda;
  p.kappa = fluid.kappa;
  p.cv = fluid.cv;
  const Expression& G = fluid.G;
  p.G = ScalarField::sample(g, [&](double x, double y) { return G(x, y); });
  return p;
}

BoundaryData RunConfig::boundary_data(const Grid& g) const {
  const DataBlock& d = data;
  return BoundaryData::sample(
      g, [&](double x, double y) { return std::array<double, 2>{d.u_B[0](x, y), d.u_B[1](x, y)}; },
      [&](double x, double y) { return d.theta_B(x, y); }, [&](double x, double y) { return d.q_B(x, y); });
}

State RunConfig::initial_state(const Grid& g, const BoundaryData& bd) const {
  const DataBlock& d = data;
  State s;
  s.rho = ScalarField::sample(g, [&](double x, double y) { return d.rho0(x, y); });
  if (d.theta0_from_extension) {
    if (!bd.theta_ext) throw std::logic_error("initial_state: temperature extension not attached");
    s.theta = *bd.theta_ext;
  } else {
    s.theta = ScalarField::sample(g, [&](double x, double y) { return d.theta0(x, y); });
  }
  if (d.u0_from_extension) {
    if (!bd.u_ext) throw std::logic_error("initial_state: velocity extension not attached");
    s.u = *bd.u_ext;
  } else {
    s.u = VectorField::sample(g, [&](double x, double y) { return std::array<double, 2>{d.u0[0](x, y), d.u0[1](x, y)}; });
  }
  return s;
}

std::vector<std::string> hypothesis_violations(const RunConfig& cfg) {
  std::vector<std::string> out;
  if (const std::string v = exponent_violation(cfg.stepper.p, cfg.stepper.q); !v.empty()) out.push_back(v);

  FluidParams fp;
  fp.mu = cfg.fluid.mu;
  fp.lambda = cfg.fluid.lambda;
  fp.kappa = cfg.fluid.kappa;
  fp.cv = cfg.fluid.cv;
  try {
    fp.validate();
  } catch (const std::exception& e) {
    out.push_back(e.what());
  }

  // provisional grid: the heat-flux alternative is checked on the data below
  GridSpec spec = cfg.grid;
  spec.heat_flux_vanishes = true;
  Grid g;
  try {
    g = Grid::build(spec);
  } catch (const std::exception& e) {
    out.push_back(e.what());
    return out;
  }
  sample_check(out, g, cfg.data.rho0, "rho0", "PP4");
  if (!cfg.data.theta0_from_extension) sample_check(out, g, cfg.data.theta0, "theta0", "PP5");
  else if (!g.has_dirichlet_face()) out.push_back("theta0: extension needs a Dirichlet face (Gamma_D is empty)");
  const BoundaryData bd = cfg.boundary_data(g);
  for (const std::string& v : bd.violations(g)) {
    if (cfg.allow_negative_heat_flux && v.find("q_B < 0") != std::string::npos) continue;
    out.push_back(v);
  }
  return out;
}

RunConfig parse_config(const std::string& text, std::optional<Mode> mode) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "line " << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError({os.str()});
  }
  if (!root.IsMap()) throw ConfigError({"configuration must be a mapping of sections"});

  Reader r;
  RunConfig cfg;
  r.check_keys(root, "top level",
               {"mode", "grid", "fluid", "data", "stepper", "monitor", "output", "mms", "compatibility", "hypotheses"});
  if (root["mode"]) {
    const std::string m = root["mode"].as<std::string>();
    if (m == "simulate") cfg.mode = Mode::simulate;
    else if (m == "mms_verify") cfg.mode = Mode::mms_verify;
    else if (m == "extension_test") cfg.mode = Mode::extension_test;
    else r.error(root["mode"], "mode must be simulate, mms_verify or extension_test, got '" + m + "'");
  }
  if (mode) cfg.mode = *mode;
  read_grid(r, root["grid"], cfg.grid);

  const YAML::Node fl = root["fluid"];
  r.check_keys(fl, "fluid", {"mu", "lambda", "kappa", "cv", "G"});
  r.get_number(fl, "mu", cfg.fluid.mu);
  r.get_number(fl, "lambda", cfg.fluid.lambda);
  r.get_number(fl, "kappa", cfg.fluid.kappa);
  r.get_number(fl, "cv", cfg.fluid.cv);
  r.get_expr(fl, "G", cfg.fluid.G);

  read_data(r, root["data"], cfg.data);

  const YAML::Node st = root["stepper"];
  r.check_keys(st, "stepper", {"dt", "t_end", "cfl_safety", "p", "q", "fixed_dt"});
  r.get_number(st, "dt", cfg.stepper.dt);
  r.get_number(st, "t_end", cfg.stepper.t_end);
  r.get_number(st, "cfl_safety", cfg.stepper.cfl_safety);
  r.get_number(st, "p", cfg.stepper.p);
  r.get_number(st, "q", cfg.stepper.q);
  r.get(st, "fixed_dt", cfg.stepper.fixed_dt, "true or false");
  // the control exponent follows the stepper's p unless set
  cfg.monitor.p = cfg.stepper.p;
  cfg.monitor.q = cfg.stepper.q;
  read_monitor(r, root["monitor"], cfg.monitor);

  const YAML::Node out = root["output"];
  r.check_keys(out, "output", {"dir", "snapshot_every"});
  r.get(out, "dir", cfg.output.dir, "a path");
  r.get(out, "snapshot_every", cfg.output.snapshot_every, "an integer");

  const YAML::Node mms = root["mms"];
  r.check_keys(mms, "mms", {"family", "dt_factor", "expected_order", "expected_density_order", "order_tol", "inconsistency", "levels"});
  r.get(mms, "family", cfg.mms.family, "a family name");
  r.get_number(mms, "dt_factor", cfg.mms.dt_factor);
  r.get_number(mms, "expected_order", cfg.mms.expected_order);
  r.get_number(mms, "order_tol", cfg.mms.order_tol);
  r.get_number(mms, "expected_density_order", cfg.mms.expected_density_order);
  r.get_number(mms, "inconsistency", cfg.mms.inconsistency);
  r.get(mms, "levels", cfg.mms.levels, "an integer");

  const YAML::Node cp = root["compatibility"];
  r.check_keys(cp, "compatibility", {"tol", "flux_tol", "first_order_tol"});
  r.get_number(cp, "tol", cfg.compatibility_tol);
  r.get_number(cp, "flux_tol", cfg.compatibility_flux_tol);
  if (cp && cp.IsMap() && cp["first_order_tol"]) {
    double v = 0.0;
    r.get_number(cp, "first_order_tol", v);
    cfg.compatibility_first_order_tol = v;
  }
  const YAML::Node hy = root["hypotheses"];
  r.check_keys(hy, "hypotheses", {"allow_negative_heat_flux"});
  r.get(hy, "allow_negative_heat_flux", cfg.allow_negative_heat_flux, "true or false");

  if (!r.problems.empty()) throw ConfigError(r.problems);

  std::vector<std::string> problems;
  try {
    cfg.monitor.validate();
  } catch (const MonitorError& e) {
    problems.push_back(e.what());
  }
  if (cfg.output.snapshot_every < 0) problems.push_back("output.snapshot_every must be non-negative");
  const bool manufactured = cfg.mode == Mode::mms_verify || cfg.data.manufactured;
  if (manufactured) {
    try {
      Manufactured::family(cfg.mms.family, cfg.grid.dim);
    } catch (const MmsError& e) {
      problems.push_back(e.what());
    }
    if (!(cfg.mms.dt_factor > 0.0)) problems.push_back("mms.dt_factor must be positive");
    if (cfg.mms.levels < 2) problems.push_back("mms.levels must be at least 2");
    if (const std::string v = exponent_violation(cfg.stepper.p, cfg.stepper.q); !v.empty())
      problems.push_back(v);
  } else {
    for (std::string& v : hypothesis_violations(cfg)) problems.push_back(std::move(v));
  }
  if (!problems.empty()) throw ConfigError(problems);

  // final grid: declare whether q_B vanishes on Gamma_N
  GridSpec provisional = cfg.grid;
  provisional.heat_flux_vanishes = true;
  if (!manufactured) {
    const Grid g = Grid::build(provisional);
    const BoundaryData bd = cfg.boundary_data(g);
    cfg.grid.heat_flux_vanishes = bd.q_vanishes(g);
    if (!bd.q_nonnegative(g))
      cfg.warnings.push_back("q_B < 0 accepted; the temperature minimum check is disabled");
  }
  return cfg;
}

RunConfig load_config(const std::string& path, std::optional<Mode> mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read configuration file " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), mode);
}

}  // namespace nsf
