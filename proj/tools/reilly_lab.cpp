#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "reilly_lab/suites.hpp"

using namespace reilly_lab;

namespace {

struct Common {
  std::string suite, config_path, out;
  std::optional<double> tol_scale;
  std::optional<long long> seed;
  std::optional<std::size_t> workers;
};

SuiteConfig load_config(const Common& o) {
  SuiteConfig c = o.config_path.empty() ? SuiteConfig() : SuiteConfig::load(o.config_path);
  if (!o.suite.empty()) c.set("general.suite", o.suite);
  if (o.tol_scale) c.set("general.tol_scale", detail::csv_number(*o.tol_scale));
  if (o.seed) c.set("general.seed", std::to_string(*o.seed));
  return c;
}

std::size_t workers_of(const Common& o) {
  if (o.workers) {
    if (*o.workers < 1) throw ConfigError("--workers must be positive");
    return *o.workers;
  }
  return default_workers();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

void add_common(CLI::App* cmd, Common& o) {
  cmd->add_option("--suite", o.suite, "reilly|bln|spectral|colesanti|boundary|flows|isoperimetric|all");
  cmd->add_option("--config", o.config_path, "key = value config file with [sections]");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--tol-scale", o.tol_scale, "multiply every pass/fail tolerance");
  cmd->add_option("--seed", o.seed, "corpus seed");
  cmd->add_option("--workers", o.workers, "concurrent suite jobs (default REILLY_LAB_WORKERS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reilly_lab: numerical checks of weighted Reilly-type identities and inequalities"};
  app.require_subcommand(1);

  Common verify_opt, sweep_opt;
  CLI::App* verify = app.add_subcommand("verify", "run a suite and write a JSON report");
  add_common(verify, verify_opt);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a suite once per value of a config field, write CSV");
  add_common(sweep_cmd, sweep_opt);
  std::string param;
  std::vector<std::string> values;
  sweep_cmd->add_option("--param", param, "config path such as bln.beta_frac")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

  CLI::App* flow = app.add_subcommand("flow", "run one flow and write its trajectory CSV");
  FlowRunSpec spec;
  std::string flow_out, flow_report;
  std::vector<double> phi;
  flow->add_option("--kind", spec.kind, "parallel-normal|weingarten|sphere");
  flow->add_option("--body", spec.body, "disk[:r] | ellipse:a,b | trig:a0,a1,... | cap:r");
  flow->add_option("--phi-coeffs", phi, "cosine coefficients of phi")->delimiter(',');
  flow->add_option("--t-end", spec.t_end, "flow horizon");
  flow->add_option("--dt", spec.dt, "time step");
  flow->add_option("--m", spec.m, "marker count");
  flow->add_option("--out", flow_out, "trajectory CSV path (default stdout)");
  flow->add_option("--report", flow_report, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      SuiteConfig c = load_config(verify_opt);
      SuiteOutcome o = run_suite(c, workers_of(verify_opt));
      write_output(verify_opt.out, o.json);
      std::size_t failed = 0, diagnostics = 0;
      for (const CheckReport& r : o.checks) {
        if (!r.pass) ++diagnostics;
        else if (!*r.pass) {
          ++failed;
          std::cerr << "FAIL " << r.name << " lhs=" << detail::csv_number(r.lhs) << " rhs=" << detail::csv_number(r.rhs)
                    << " slack=" << detail::csv_number(r.slack) << " tol=" << detail::csv_number(r.tolerance) << "\n";
        }
      }
      std::cerr << o.checks.size() << " checks, " << failed << " failed, " << diagnostics << " diagnostic\n";
      return o.status;
    }
    if (sweep_cmd->parsed()) {
      SuiteConfig c = load_config(sweep_opt);
      std::vector<SweepRow> rows = sweep(c, param, values, workers_of(sweep_opt));
      std::ostringstream os;
      write_sweep_csv(os, param, rows);
      write_output(sweep_opt.out, os.str());
      int status = 0;
      for (const SweepRow& r : rows) status = std::max(status, r.status);
      return status;
    }
    if (flow->parsed()) {
      if (!phi.empty()) spec.phi_coeffs = phi;
      FlowRunOutcome o = flow_run(spec);
      std::ostringstream os;
      write_flow_csv(os, o.flow);
      write_output(flow_out, os.str());
      if (!flow_report.empty()) write_output(flow_report, emit_report_string(flow_echo(spec), o.checks));
      for (const CheckReport& r : o.checks)
        std::cerr << (r.pass ? (*r.pass ? "PASS " : "FAIL ") : "DIAG ") << r.name << " lhs=" << detail::csv_number(r.lhs)
                  << " rhs=" << detail::csv_number(r.rhs) << "\n";
      return o.status;
    }
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
