#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slowfast/asymptotics.hpp"
#include "slowfast/blowup.hpp"
#include "slowfast/config.hpp"
#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/example5.hpp"
#include "slowfast/io.hpp"
#include "slowfast/numerics.hpp"
#include "slowfast/system.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace slowfast;

// Writes to config.out when set, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output path '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

ordered_json system_json(const SlowFastSystem& sys) {
  return ordered_json::parse(system_to_json(sys));
}

int cmd_check(const RunConfig& config) {
  const SlowFastSystem sys = config.make_system();
  const DelayConditionReport report =
      check_conditions(sys, config.x0, config.x_exit, config.grid_n);
  ordered_json j;
  j["entry_ok"] = report.entry_ok;
  j["exit_ok"] = report.exit_ok;
  j["sign_changes"] = report.sign_changes;
  j["classical"] = report.classical;
  j["system"] = system_json(sys);
  Sink sink(config.out);
  sink.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_p0(const RunConfig& config) {
  const SlowFastSystem sys = config.make_system();
  const ExitSolve exit = theoretical_exit(sys, config.x0);
  ordered_json j;
  j["x0"] = exit.x0;
  j["p0"] = exit.p0;
  j["integral_residual"] = exit.integral_residual;
  j["bracket"] = {exit.bracket_lo, exit.bracket_hi};
  j["leftmost"] = exit.leftmost;
  j["system"] = system_json(sys);
  Sink sink(config.out);
  sink.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_return(const RunConfig& config, const std::string& trace_path) {
  const SlowFastSystem sys = config.make_system();
  const Trajectory traj =
      return_trajectory(sys, config.x0, config.z0, config.eps, config.tol);
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path, std::ios::binary | std::ios::trunc);
    if (!trace) throw ConfigError("cannot open trace path '" + trace_path + "'");
    const std::vector<std::string> names{"x", "z"};
    write_trajectory_csv(trace, traj, names);
  }
  Sink sink(config.out);
  const std::vector<std::string> header{"x0", "z0", "eps", "p_eps", "steps"};
  CsvWriter csv(sink.stream(), header);
  csv.row(std::vector<double>{config.x0, config.z0, config.eps, traj.event->state[0],
                              static_cast<double>(traj.steps_accepted)});
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  const SlowFastSystem sys = config.make_system();
  if (config.eps_ladder.empty())
    throw ConfigError("sweep: provide an eps ladder (--ladder lo:hi:n[log])");
  const ConvergenceStudy study =
      convergence_study(sys, config.x0, config.z0, config.eps_ladder, config.tol);
  Sink sink(config.out);
  const std::vector<std::string> header{"eps", "p_eps", "p0", "err"};
  CsvWriter csv(sink.stream(), header);
  for (const ConvergenceRow& row : study.rows)
    csv.row(std::vector<double>{row.eps, row.p_eps, row.p0, row.err});
  for (double eps : study.escaped)
    std::cerr << "note: trajectory escaped the domain at eps = " << fmt17(eps) << "\n";
  return 0;
}

int cmd_blowup(const RunConfig& config) {
  const SlowFastSystem sys = config.make_system();
  if (config.mode == "singular") {
    ordered_json orbits = ordered_json::array();
    for (double e1 : config.e1_values) {
      const SingularOrbit orbit = singular_composition(sys, config.x0, e1);
      orbits.push_back({{"x0", orbit.x0},
                        {"x1", orbit.x1},
                        {"x2", orbit.x2},
                        {"x3", orbit.x3},
                        {"E1", orbit.E1}});
    }
    ordered_json j;
    j["orbits"] = orbits;
    j["system"] = system_json(sys);
    Sink sink(config.out);
    sink.stream() << j.dump(2) << "\n";
    return 0;
  }
  const PipelineResult run = affine_pipeline(sys, config.x0, config.z0, config.eps,
                                             config.e1_values.front(), config.tol);
  Sink sink(config.out);
  if (config.mode == "pipeline") {
    const std::vector<std::string> names{"x", "z", "E"};
    std::vector<std::string> header{"t", "x", "z", "E"};
    CsvWriter csv(sink.stream(), header);
    double t_offset = 0.0;
    for (const Trajectory& leg : run.legs) {
      for (std::size_t i = 0; i < leg.t.size(); ++i)
        csv.row(std::vector<double>{leg.t[i] + t_offset, leg.y[i][0], leg.y[i][1],
                                    leg.y[i][2]});
      t_offset += leg.t_end();
    }
  } else {  // polar trace of the same run
    std::vector<std::string> header{"t", "x", "theta", "r"};
    CsvWriter csv(sink.stream(), header);
    double t_offset = 0.0;
    for (const Trajectory& leg : run.legs) {
      for (std::size_t i = 0; i < leg.t.size(); ++i) {
        const PolarState p =
            affine_to_polar(AffineState{leg.y[i][0], leg.y[i][1], leg.y[i][2]});
        csv.row(std::vector<double>{leg.t[i] + t_offset, p.x, p.theta, p.r});
      }
      t_offset += leg.t_end();
    }
  }
  if (!config.out.empty()) {
    ordered_json j;
    j["x_exit"] = run.x_exit;
    j["z1"] = run.z1;
    j["E3"] = run.e3;
    j["max_conservation_err"] = run.max_conservation_err;
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_fit(const RunConfig& config, const std::string& samples_path) {
  const SlowFastSystem sys = config.make_system();
  const std::vector<double> ladder =
      config.eps_ladder.empty() ? default_eps_ladder() : config.eps_ladder;
  const LogTermReport report =
      detect_log_term(sys, config.x0, config.z0, ladder, config.tol);
  ordered_json j;
  j["basis"] = ordered_json::array();
  for (const auto& [k, l] : report.fit.basis) j["basis"].push_back({k, l});
  j["coeffs"] = report.fit.coeffs;
  j["residual"] = report.fit.residual_norm;
  j["condition"] = report.fit.condition_estimate;
  j["ill_conditioned"] = report.fit.ill_conditioned;
  j["a01"] = report.a01;
  j["threshold"] = report.threshold;  // engineering choice, not a paper constant
  j["log_free_residual"] = report.log_free_residual;
  j["has_log"] = report.has_log;
  j["system"] = system_json(sys);
  Sink sink(config.out);
  sink.stream() << j.dump(2) << "\n";
  if (!samples_path.empty()) {
    std::ofstream csv_file(samples_path, std::ios::binary | std::ios::trunc);
    if (!csv_file) throw ConfigError("cannot open samples path '" + samples_path + "'");
    const std::vector<std::string> header{"eps", "y"};
    CsvWriter csv(csv_file, header);
    for (std::size_t i = 0; i < report.eps.size(); ++i)
      csv.row(std::vector<double>{report.eps[i], report.y[i]});
  }
  return 0;
}

int cmd_example5(const RunConfig& config) {
  std::vector<double> ladder = config.eps_ladder;
  if (ladder.empty()) ladder = {1e-2, 5e-3, 2e-3, 1e-3};
  Sink sink(config.out);
  const std::vector<std::string> header{"x0", "eps", "c_closed", "c_fd", "rel_err"};
  CsvWriter csv(sink.stream(), header);
  for (double eps : ladder) {
    const PerturbationResult r =
        c_via_finite_difference(config.x0, eps, config.alpha, config.tol);
    csv.row(std::vector<double>{r.x0, r.eps, r.c_closed, r.c_fd, r.agreement});
  }
  return 0;
}

int cmd_kappa(const RunConfig& config) {
  const SlowFastSystem base = config.make_system();
  const KappaSystem pair = kappa_transform(base);
  const double w0 = kappa_inverse(config.z0);
  // The linear fast term contracts z through hundreds of orders of magnitude;
  // the direct leg needs a purely relative error control to stay meaningful.
  Tolerances deep = config.tol;
  deep.abs = std::min(deep.abs, 1e-300);
  const ReturnSample direct =
      numerical_return(base, config.x0, config.z0, config.eps, deep);
  const ReturnSample through =
      numerical_return(pair.transformed, config.x0, w0, config.eps, config.tol);
  const ExitSolve exit = theoretical_exit(base, config.x0);
  ordered_json j;
  j["x0"] = config.x0;
  j["z0"] = config.z0;
  j["w0"] = w0;
  j["eps"] = config.eps;
  j["p_direct"] = direct.p_eps;
  j["p_kappa"] = through.p_eps;
  j["diff"] = through.p_eps - direct.p_eps;
  j["p0"] = exit.p0;
  j["system"] = system_json(base);
  Sink sink(config.out);
  sink.stream() << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entry-exit maps of slow-fast planar systems: simulation, "
               "blow-up transition maps, and asymptotic-scale fits"};
  app.require_subcommand(1);

  std::string config_path, out_path, system_name, ladder_text, mode, dump_config_path;
  std::string samples_path, trace_path;
  std::vector<std::string> param_args;
  std::vector<double> e1_args;
  double x0 = 0, z0 = 0, eps = 0, alpha = 0, x_exit = 0, rel = 0, abs_tol = 0;
  int grid_n = 0, degree = 0;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--system", system_name, "catalog system name");
  app.add_option("--param", param_args, "system parameter as name=value");
  app.add_option("--x0", x0, "entry abscissa");
  app.add_option("--z0", z0, "section height");
  app.add_option("--eps", eps, "singular parameter");
  app.add_option("--E1", e1_args, "corner section value(s)");
  app.add_option("--alpha", alpha, "perturbation size for example5");
  app.add_option("--ladder", ladder_text, "eps ladder as lo:hi:n or lo:hi:nlog");
  app.add_option("--x-exit", x_exit, "exit abscissa for condition checks");
  app.add_option("--grid-n", grid_n, "condition-check grid resolution");
  app.add_option("--degree", degree, "fit basis degree");
  app.add_option("--mode", mode, "blowup mode: singular | pipeline | polar");
  app.add_option("--rel", rel, "relative integration tolerance");
  app.add_option("--abs", abs_tol, "absolute integration tolerance");
  app.add_option("--dump-config", dump_config_path, "write the resolved config JSON");

  CLI::App* sub_check = app.add_subcommand("check", "validate entry/exit sign conditions");
  CLI::App* sub_p0 = app.add_subcommand("p0", "theoretical exit point from the balance integral");
  CLI::App* sub_return = app.add_subcommand("return", "simulated first-return to z = z0");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "return map along an eps ladder");
  CLI::App* sub_blowup = app.add_subcommand("blowup", "singular orbit or chart pipeline");
  CLI::App* sub_fit = app.add_subcommand("fit", "asymptotic-scale fit and log-term detection");
  CLI::App* sub_example5 = app.add_subcommand("example5", "closed-form vs simulated perturbation coefficient");
  CLI::App* sub_kappa = app.add_subcommand("kappa", "linear fast term reduced through kappa(w)");
  for (CLI::App* sub : {sub_check, sub_p0, sub_return, sub_sweep, sub_blowup, sub_fit,
                        sub_example5, sub_kappa})
    sub->fallthrough();
  sub_fit->add_option("--samples", samples_path, "also write the fitted samples CSV");
  sub_return->add_option("--trace", trace_path, "also write the trajectory CSV (t,x,z)");

  try {
    app.parse(argc, argv);

    RunConfig config;
    if (app.count("--config")) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      config = config_from_json(text.str());
    }
    if (app.count("--system")) config.system_name = system_name;
    for (const std::string& arg : param_args) {
      const auto pos = arg.find('=');
      if (pos == std::string::npos)
        throw ConfigError("--param expects name=value, got '" + arg + "'");
      try {
        config.params[arg.substr(0, pos)] = std::stod(arg.substr(pos + 1));
      } catch (const std::exception&) {
        throw ConfigError("--param: bad value in '" + arg + "'");
      }
    }
    if (app.count("--x0")) config.x0 = x0;
    if (app.count("--z0")) config.z0 = z0;
    if (app.count("--eps")) config.eps = eps;
    if (app.count("--E1")) config.e1_values = e1_args;
    if (app.count("--alpha")) config.alpha = alpha;
    if (app.count("--ladder")) config.eps_ladder = parse_ladder(ladder_text);
    if (app.count("--x-exit")) config.x_exit = x_exit;
    if (app.count("--grid-n")) config.grid_n = grid_n;
    if (app.count("--degree")) config.degree = degree;
    if (app.count("--mode")) config.mode = mode;
    if (app.count("--rel")) config.tol.rel = rel;
    if (app.count("--abs")) config.tol.abs = abs_tol;
    if (app.count("--out")) config.out = out_path;
    config.validate();

    if (app.count("--dump-config")) {
      std::ofstream dump(dump_config_path, std::ios::binary | std::ios::trunc);
      if (!dump) throw ConfigError("cannot write config to '" + dump_config_path + "'");
      dump << config_to_json(config);
    }

    if (sub_check->parsed()) return cmd_check(config);
    if (sub_p0->parsed()) return cmd_p0(config);
    if (sub_return->parsed()) return cmd_return(config, trace_path);
    if (sub_sweep->parsed()) return cmd_sweep(config);
    if (sub_blowup->parsed()) return cmd_blowup(config);
    if (sub_fit->parsed()) return cmd_fit(config, samples_path);
    if (sub_example5->parsed()) return cmd_example5(config);
    if (sub_kappa->parsed()) return cmd_kappa(config);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownSystemError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
