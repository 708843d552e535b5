// Command-line front end: simulate, mms-verify, extension-test.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nsf/config.hpp"
#include "nsf/extension.hpp"
#include "nsf/harness.hpp"

using namespace nsf;

namespace {

// --out beats NSF_OUTPUT_DIR, which beats output.dir in the file.
std::string output_dir(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NSF_OUTPUT_DIR"); env && *env) return env;
  return cfg.output.dir;
}

int report_config_error(const ConfigError& e) {
  std::cerr << "configuration rejected:\n";
  for (const std::string& p : e.problems()) std::cerr << "  " << p << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes-Fourier finite-difference lab"};
  app.require_subcommand(1);

  std::string config, out;
  int levels = 0;

  auto* sim = app.add_subcommand("simulate", "run a configuration and write diagnostics");
  sim->add_option("config", config, "configuration file")->required();
  sim->add_option("--out", out, "output directory");

  auto* mms = app.add_subcommand("mms-verify", "refinement study on a manufactured solution");
  mms->add_option("config", config, "configuration file")->required();
  auto* levels_opt = mms->add_option("--levels", levels, "number of refinement levels (default mms.levels)")->check(CLI::Range(2, 8));
  mms->add_option("--out", out, "output directory");

  auto* ext = app.add_subcommand("extension-test", "build the boundary-data extensions and check them");
  ext->add_option("config", config, "configuration file")->required();
  ext->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const RunConfig cfg = load_config(config, Mode::simulate);
      const SimulationResult r = run_simulation(cfg, output_dir(cfg, out), &std::cout);
      if (!r.message.empty()) std::cerr << r.message << '\n';
      return exit_code(r.cause);
    }
    if (*mms) {
      const RunConfig cfg = load_config(config, Mode::mms_verify);
      const MmsResult r = mms_verify(cfg, levels_opt->count() ? levels : cfg.mms.levels, output_dir(cfg, out));
      for (const MmsLevel& l : r.levels)
        std::cout << "n = " << l.n << "  err rho " << l.err_rho << "  theta " << l.err_theta << "  u " << l.err_u
                  << "  orders " << l.order_rho << " " << l.order_theta << " " << l.order_u << '\n';
      std::cout << r.message << '\n';
      return exit_code(r.attained ? ExitCause::completed : ExitCause::order_not_attained);
    }
    const RunConfig cfg = load_config(config, Mode::extension_test);
    const ExtensionReport r = extension_test(cfg, output_dir(cfg, out));
    std::cout << "laplace residual " << r.laplace_residual << ", lame residual " << r.lame_residual
              << ", dirichlet " << r.dirichlet_residual << ", neumann " << r.neumann_residual << ", walls "
              << r.wall_residual << ", min theta " << r.theta_min << '\n';
    return exit_code(r.ok ? ExitCause::completed : ExitCause::extension_failure);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const ExtensionError& e) {
    std::cerr << "extension failed: " << e.what() << '\n';
    return exit_code(ExitCause::extension_failure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
