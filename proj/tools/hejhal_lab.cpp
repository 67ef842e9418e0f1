#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hejhal_lab/suite.hpp"

namespace {

using namespace hejhal_lab;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config, "cannot write " + path);
  out << text;
}

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* v = std::getenv("HEJHAL_LAB_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

int cmd_verify(const std::string& config, const std::string& out) {
  const RunConfig rc = load_config(config);
  const VerifyReport rep = run_verify(rc);
  emit(to_json(rep).dump(2) + "\n", out);
  if (!rep.pass()) {
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "FAIL " << c.name << ": value " << c.value << ", tolerance " << c.tolerance << "\n";
    return int(ExitCode::check_failed);
  }
  return int(ExitCode::ok);
}

int cmd_lambda(const std::string& config, const std::string& method, const std::string& out) {
  const RunConfig rc = load_config(config);
  std::vector<LambdaMethod> methods;
  if (method == "all")
    methods = all_methods();
  else
    methods = {parse_method(method)};
  if (rc.domain.connectivity() < 2) throw Error(Errc::precondition, "connectivity must be ≥ 2");
  const CutSystem cuts = config_cuts(rc);
  const SampleSets s = make_samples(rc, &cuts);
  const KernelContext ctx(rc.domain, solver_settings(rc));
  emit(lambda_csv(lambda_methods(ctx, cuts, s, methods)), out);
  return int(ExitCode::ok);
}

int cmd_sweep(const std::string& config, int steps, const std::string& out) {
  const RunConfig rc = load_config(config);
  if (steps < 1) throw Error(Errc::precondition, "steps must be >= 1");
  const HomotopyTrace tr = run_sweep(rc, steps);
  emit(sweep_csv(tr, rc.domain.connectivity() + 1), out);
  return tr.all_positive() ? int(ExitCode::ok) : int(ExitCode::check_failed);
}

int cmd_tabulate(const std::string& config, const std::string& kernel, int grid, const std::string& out) {
  const RunConfig rc = load_config(config);
  emit(table_csv(tabulate(rc, parse_kernel(kernel), grid)), out);
  return int(ExitCode::ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel identities and lambda-matrix checks on multiply connected planar domains"};
  app.require_subcommand(1);
  std::string config, out, method = "all", kernel = "S";
  int steps = 5, grid = 16;

  auto* verify = app.add_subcommand("verify", "run the invariant suite and write a JSON report");
  verify->add_option("config", config, "domain config (JSON)")->required();
  verify->add_option("--out", out, "report path (default: stdout)");

  auto* lambda = app.add_subcommand("lambda", "lambda matrix and eigenvalues as CSV");
  lambda->add_option("config", config, "domain config (JSON)")->required();
  lambda->add_option("--method", method, "fit|periods|double|all");
  lambda->add_option("--out", out, "CSV path (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "shrinking-hole homotopy trace as CSV");
  sweep->add_option("config", config, "domain config (JSON)")->required();
  sweep->add_option("--steps", steps, "number of steps");
  sweep->add_option("--out", out, "CSV path (default: stdout)");

  auto* tab = app.add_subcommand("tabulate", "kernel values on an interior grid as CSV");
  tab->add_option("config", config, "domain config (JSON)")->required();
  tab->add_option("--kernel", kernel, "S|L|K|Lambda|F");
  tab->add_option("--grid", grid, "grid points per side");
  tab->add_option("--out", out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : int(ExitCode::input_error);
  }
  apply_thread_cap();
  try {
    if (*verify) return cmd_verify(config, out);
    if (*lambda) return cmd_lambda(config, method, out);
    if (*sweep) return cmd_sweep(config, steps, out);
    return cmd_tabulate(config, kernel, grid, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(exit_code_for(e));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(ExitCode::numerical_failure);
  }
}
