// hfgtflow: simulate, compare, solve, gen-exogenous, plot.
//
// Exit codes: 0 success, 1 comparison threshold exceeded, 2 invalid input,
// 3 numerical failure. Every flag can be set through the environment with the
// HFGTFLOW_ prefix (e.g. HFGTFLOW_THRESHOLD for --threshold).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hfgtflow/compare.hpp"
#include "hfgtflow/errors.hpp"
#include "hfgtflow/model_io.hpp"
#include "hfgtflow/monolake.hpp"
#include "hfgtflow/qp_solver.hpp"
#include "hfgtflow/sd_engine.hpp"
#include "hfgtflow/svg.hpp"

namespace {

using namespace hfgtflow;

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const Error &e) {
  const std::string &c = e.code();
  if (c == errc::nonfinite_state || c == errc::nonfinite_value ||
      c == errc::division_by_zero || c == errc::singular_kkt)
    return kExitNumerical;
  return kExitInvalid;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::invalid_document, "file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(errc::invalid_document, "cannot write: " + path);
  out << content;
}

ModelDocument parse_or_fail(const std::string &path,
                            std::optional<DocKind> hint = std::nullopt) {
  ParseResult result = parse_document(read_file(path), hint);
  for (const auto &d : result.diagnostics)
    std::cerr << path << d.location << ": "
              << (d.severity == Diagnostic::Severity::Error ? "error"
                                                            : "warning")
              << " [" << d.code << "] " << d.message << "\n";
  if (!result.ok())
    throw Error(errc::invalid_document, "failed to parse " + path);
  return *result.document;
}

std::string upper(std::string s) {
  for (char &c : s)
    c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

CLI::Option *env(CLI::Option *opt, const std::string &name) {
  return opt->envname("HFGTFLOW_" + upper(name));
}

struct SimulateArgs {
  std::string engine = "hfgt";
  std::string model;
  std::string exogenous;
  long horizon = -1; // -1 means take it from the document
  double dt = 1.0;
  std::string out;
};

MonoLakeBundle bundle_from(const ModelDocument &doc, const SimulateArgs &args) {
  HfgtSystemDoc sys = to_hfgt_system(doc);
  if (sys.device_suite != "monolake")
    throw Error(errc::invalid_document,
                "hfgt-system document has no device suite binding");
  if (args.exogenous.empty())
    throw Error(errc::invalid_document,
                "--exogenous is required for hfgt-system models");
  ExogenousSeries series = load_exogenous_csv(read_file(args.exogenous));
  const std::size_t horizon =
      args.horizon >= 0 ? std::size_t(args.horizon) : 100;
  return build_monolake(sys.params, series, horizon, args.dt);
}

Trajectory run_hfgt(const MonoLakeBundle &bundle,
                    std::vector<std::string> *warnings = nullptr) {
  HfnmcfProblem problem = assemble(bundle.system, bundle.assembly);
  Solution sol = forward_propagate(problem);
  if (warnings)
    *warnings = sol.warnings;
  return solution_trajectory(problem, sol);
}

int cmd_simulate(const SimulateArgs &args) {
  ModelDocument doc = parse_or_fail(args.model);
  Trajectory traj;
  if (doc.kind == DocKind::StockFlow) {
    StockFlowModel model = to_stockflow(doc);
    if (args.horizon >= 0)
      model.horizon = std::size_t(args.horizon);
    model.dt = args.dt;
    if (!args.exogenous.empty())
      for (auto &[name, track] : load_series(read_file(args.exogenous), {}))
        model.exogenous[name] = track;
    if (args.engine != "sd")
      throw Error(errc::invalid_document,
                  "stockflow documents run on the sd engine only");
    traj = run_sd(model);
  } else if (doc.kind == DocKind::HfgtSystem) {
    MonoLakeBundle bundle = bundle_from(doc, args);
    if (args.engine == "sd") {
      traj = run_sd(bundle.stockflow);
    } else {
      std::vector<std::string> warnings;
      traj = run_hfgt(bundle, &warnings);
      for (const auto &w : warnings)
        std::cerr << "warning: " << w << "\n";
    }
  } else {
    throw Error(errc::invalid_document,
                "simulate needs a stockflow or hfgt-system document");
  }
  write_file(args.out, traj.to_csv());
  return kExitOk;
}

int cmd_compare(const SimulateArgs &args, double threshold,
                const std::string &out) {
  ModelDocument doc = parse_or_fail(args.model, DocKind::HfgtSystem);
  MonoLakeBundle bundle = bundle_from(doc, args);

  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  Trajectory oracle = run_sd(bundle.stockflow);
  auto t1 = clock::now();
  Trajectory candidate = run_hfgt(bundle);
  auto t2 = clock::now();

  std::vector<std::string> vars = {"V_Mono", "V_Aqui"};
  for (const auto &c : bundle.system.capabilities())
    vars.push_back(c.id);

  CompareReport report =
      compare_trajectories(oracle, candidate, vars, threshold);
  report.oracle_runtime_s = std::chrono::duration<double>(t1 - t0).count();
  report.candidate_runtime_s = std::chrono::duration<double>(t2 - t1).count();
  {
    std::ostringstream cfg;
    cfg << "model=" << args.model << " exogenous=" << args.exogenous
        << " horizon=" << (args.horizon >= 0 ? args.horizon : 100)
        << " dt=" << args.dt << " threshold=" << threshold;
    report.config_echo = cfg.str();
  }
  write_file(out, report_to_json(report));
  if (!report.pass) {
    for (const auto &v : report.variables)
      if (!(v.nrmse_pct <= threshold))
        std::cerr << "threshold exceeded: " << v.name << " nRMSE "
                  << v.nrmse_pct << "% > " << threshold << "%\n";
    return kExitThreshold;
  }
  return kExitOk;
}

int cmd_solve(const std::string &problem_path, const std::string &out) {
  ModelDocument doc = parse_or_fail(problem_path, DocKind::HfnmcfSpec);
  QpProblemDoc qp = to_qp_problem(doc);
  Solution sol = qp.has_bounds
                     ? solve_box_qp(qp.f_quad, qp.f_lin, qp.a, qp.b, qp.lower,
                                    qp.upper)
                     : solve_equality_qp(qp.f_quad, qp.f_lin, qp.a, qp.b);
  nlohmann::json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["max_residual"] = sol.max_residual;
  j["stationarity_residual"] = sol.stationarity_residual;
  j["x"] = std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size());
  write_file(out, j.dump(1) + "\n");
  return kExitOk;
}

int cmd_gen(const std::string &spec_path, std::uint64_t seed,
            std::size_t steps, const std::string &out) {
  ModelDocument doc = parse_or_fail(spec_path, DocKind::MarkovSpec);
  auto tracks = gen_exogenous(to_markov(doc), seed, steps);

  std::string csv = "k";
  for (const auto &[name, series] : tracks)
    csv += "," + name;
  csv += "\n";
  for (std::size_t k = 0; k < steps; ++k) {
    csv += std::to_string(k);
    for (const auto &[name, series] : tracks) {
      std::ostringstream v;
      v.precision(17);
      v << series[k];
      csv += "," + v.str();
    }
    csv += "\n";
  }
  write_file(out, csv);
  return kExitOk;
}

int cmd_plot(const std::string &traj_path, const std::string &vars_csv,
             const std::string &out, int width, int height,
             const std::string &title) {
  Trajectory traj = Trajectory::from_csv(read_file(traj_path));
  std::vector<std::string> vars;
  std::istringstream ss(vars_csv);
  std::string name;
  while (std::getline(ss, name, ','))
    if (!name.empty())
      vars.push_back(name);
  if (vars.empty())
    throw Error(errc::invalid_document, "--vars must name at least one column");
  SvgOptions opt;
  opt.width = width;
  opt.height = height;
  opt.title = title;
  write_file(out, render_svg(traj, vars, opt));
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"hetero-functional network flow toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  double threshold = 0.15;
  std::string report_out = "report.json";
  std::string problem_path, solution_out = "solution.json";
  std::string spec_path, gen_out = "exogenous.csv";
  std::uint64_t seed = 0;
  std::size_t steps = 100;
  std::string traj_path, vars_csv, svg_out = "plot.svg", title;
  int width = 800, height = 480;

  auto *simulate = app.add_subcommand("simulate", "run one engine to CSV");
  env(simulate->add_option("--engine", sim.engine)
          ->check(CLI::IsMember({"sd", "hfgt"})),
      "engine");
  env(simulate->add_option("--model", sim.model)->required(), "model");
  env(simulate->add_option("--exogenous", sim.exogenous), "exogenous");
  env(simulate->add_option("--horizon", sim.horizon), "horizon");
  env(simulate->add_option("--dt", sim.dt), "dt");
  env(simulate->add_option("--out", sim.out)->required(), "out");

  auto *compare = app.add_subcommand("compare", "run both engines and report");
  env(compare->add_option("--model", sim.model)->required(), "model");
  env(compare->add_option("--exogenous", sim.exogenous), "exogenous");
  env(compare->add_option("--horizon", sim.horizon), "horizon");
  env(compare->add_option("--dt", sim.dt), "dt");
  env(compare->add_option("--threshold", threshold), "threshold");
  env(compare->add_option("--out", report_out), "out");

  auto *solve = app.add_subcommand("solve", "solve a problem document");
  env(solve->add_option("--problem", problem_path)->required(), "problem");
  env(solve->add_option("--out", solution_out), "out");

  auto *gen = app.add_subcommand("gen-exogenous", "sample Markov-chain series");
  env(gen->add_option("--spec", spec_path)->required(), "spec");
  env(gen->add_option("--seed", seed), "seed");
  env(gen->add_option("--steps", steps), "steps");
  env(gen->add_option("--out", gen_out), "out");

  auto *plot = app.add_subcommand("plot", "render a trajectory CSV as SVG");
  env(plot->add_option("--traj", traj_path)->required(), "traj");
  env(plot->add_option("--vars", vars_csv)->required(), "vars");
  env(plot->add_option("--out", svg_out), "out");
  env(plot->add_option("--width", width), "width");
  env(plot->add_option("--height", height), "height");
  env(plot->add_option("--title", title), "title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(sim);
    if (compare->parsed())
      return cmd_compare(sim, threshold, report_out);
    if (solve->parsed())
      return cmd_solve(problem_path, solution_out);
    if (gen->parsed())
      return cmd_gen(spec_path, seed, steps, gen_out);
    if (plot->parsed())
      return cmd_plot(traj_path, vars_csv, svg_out, width, height, title);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
