#include "cli.hpp"

#include "lpreg/instances.hpp"
#include "lpreg/low_precision.hpp"
#include "lpreg/numerics.hpp"
#include "lpreg/reductions.hpp"
#include "lpreg/refinement.hpp"
#include "lpreg/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <map>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace lpreg::cli {

namespace {

struct RunSpec {
  std::string gen;          // "matrix" | "graph" | "" (csv)
  std::string csv_path;
  std::string csv_target;
  Index rows = 50, cols = 40;
  Index nodes = 100, labeled = 10;
  double p = 2.0;
  double eps = 1e-8;
  std::string solver = "auto";  // low | refine | auto
  std::uint64_t seed = 0;
};

GeneralInstance make_instance(const RunSpec& spec) {
  if (!spec.csv_path.empty())
    return load_csv(spec.csv_path, spec.csv_target, spec.p);
  if (spec.gen == "matrix")
    return gen_random_matrix({spec.rows, spec.cols, spec.seed}, spec.p);
  if (spec.gen == "graph") {
    RandomGraphSpec g;
    g.n_nodes = spec.nodes;
    g.n_labeled = spec.labeled;
    g.p = spec.p;
    g.seed = spec.seed;
    return gen_random_graph(g);
  }
  throw SolverError("no instance source: pass --gen or --csv");
}

SolveReport execute(const RunSpec& spec) {
  SolveReport rep;
  rep.p = spec.p;
  rep.epsilon = spec.eps;
  rep.seed = spec.seed;

  std::string solver = spec.solver;
  if (solver == "auto") solver = spec.p < 2.0 ? "small_p" : "refine";
  if (solver != "small_p" && spec.p < 2.0)
    throw SolverError("--solver " + solver + " requires p >= 2");

  const GeneralInstance inst = make_instance(spec);
  rep.n = inst.n();
  rep.d = inst.m();

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (solver == "small_p") {
      rep.solver = SolverKind::SmallP;
      const SmallPResult sp = solve_small_p_general(inst, spec.eps);
      rep.linear_solves = sp.linear_solves;
      rep.residual_calls = sp.residual_calls;
      rep.objective = lp_norm(inst.N * sp.x - inst.v, spec.p);
      rep.outcome = OutcomeKind::Primal;
    } else if (solver == "low") {
      rep.solver = SolverKind::LowPrecision;
      GeneralSystem sys{inst};
      L2pOptions opts;
      opts.epsilon = spec.eps;
      opts.p = spec.p / 2.0;  // solver targets || . ||_{2p'}
      const L2pResult res = l2p_minimization(sys, opts);
      rep.linear_solves = res.linear_solves;
      rep.objective =
          lp_norm(inst.N * res.x.head(inst.n()) - inst.v, spec.p);
      rep.outcome = OutcomeKind::Primal;
    } else if (solver == "refine") {
      rep.solver = SolverKind::Refinement;
      GeneralSystem sys{inst};
      RefineOptions opts;
      opts.epsilon = spec.eps;
      const RefineResult res = lp_refine(sys, spec.p, opts);
      rep.linear_solves = res.linear_solves;
      rep.residual_calls = res.residual_calls;
      rep.objective =
          lp_norm(inst.N * res.x.head(inst.n()) - inst.v, spec.p);
      rep.outcome = OutcomeKind::Primal;
    } else {
      throw SolverError("unknown solver: " + solver);
    }
  } catch (...) {
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    throw;
  }
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return rep;
}

void add_common_flags(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--gen", spec.gen, "instance generator")
      ->check(CLI::IsMember({"matrix", "graph"}));
  cmd->add_option("--csv", spec.csv_path, "CSV dataset path");
  cmd->add_option("--target", spec.csv_target, "CSV target column");
  cmd->add_option("--rows", spec.rows, "matrix rows");
  cmd->add_option("--cols", spec.cols, "matrix cols");
  cmd->add_option("--nodes", spec.nodes, "graph nodes");
  cmd->add_option("--labeled", spec.labeled, "labeled graph nodes");
  cmd->add_option("--p", spec.p, "norm exponent");
  cmd->add_option("--eps", spec.eps, "accuracy");
  cmd->add_option("--solver", spec.solver, "solver")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, std::string>{{"low", "low"},
                                             {"refine", "refine"},
                                             {"refinement", "refine"},
                                             {"auto", "auto"}}));
  cmd->add_option("--seed", spec.seed, "rng seed");
}

int emit(const std::vector<SolveReport>& reports, const std::string& out_path,
         const std::string& format, bool with_summary, std::ostream& out,
         std::ostream& err) {
  std::ostringstream body;
  if (format == "csv") {
    body << emit_plot_data(reports);
  } else {
    for (const auto& r : reports) body << r.to_json_line() << '\n';
    if (with_summary) {
      for (const auto& g : summarize_reports(reports)) {
        nlohmann::ordered_json j;
        j["summary"]["solver"] = g.solver;
        j["summary"]["p"] = g.p;
        j["summary"]["n"] = g.n;
        j["summary"]["count"] = g.count;
        j["summary"]["mean_iters"] = g.mean_iters;
        j["summary"]["std_iters"] = g.std_iters;
        j["summary"]["mean_time_ms"] = g.mean_time_ms;
        j["summary"]["std_time_ms"] = g.std_time_ms;
        body << j.dump() << '\n';
      }
    }
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::app);  // reports are append-only
    if (!f) {
      err << "cannot open --out file: " << out_path << '\n';
      return kExitError;
    }
    f << body.str();
  } else {
    out << body.str();
  }
  return kExitPrimal;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"lp-norm regression solvers and benchmark harness"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string out_path;
  std::string format = "jsonl";
  Index reps = 1;
  std::string sweep;

  CLI::App* solve = app.add_subcommand("solve", "run one solver on one instance");
  add_common_flags(solve, spec);
  solve->add_option("--out", out_path, "output path (appends)");
  solve->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  CLI::App* bench = app.add_subcommand("bench", "sweep solvers over instances");
  add_common_flags(bench, spec);
  bench->add_option("--reps", reps, "repetitions per configuration");
  bench->add_option("--sweep", sweep, "sweep spec, e.g. p=2,4,8,16");
  bench->add_option("--out", out_path, "output path (appends)");
  bench->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  try {
    std::vector<const char*> argv;
    argv.push_back("lpreg");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitPrimal;
    }
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::vector<RunSpec> runs;
    if (app.got_subcommand("solve")) {
      runs.push_back(spec);
    } else {
      std::vector<double> ps{spec.p};
      if (!sweep.empty()) {
        if (sweep.rfind("p=", 0) != 0) {
          err << "unsupported sweep (expected p=v1,v2,...): " << sweep << '\n';
          return kExitUsage;
        }
        ps.clear();
        std::stringstream ss(sweep.substr(2));
        std::string tok;
        while (std::getline(ss, tok, ',')) ps.push_back(std::stod(tok));
      }
      for (double pv : ps)
        for (Index rep = 0; rep < reps; ++rep) {
          RunSpec r = spec;
          r.p = pv;
          r.seed = spec.seed + static_cast<std::uint64_t>(rep);
          runs.push_back(r);
        }
    }

    // parallel over runs; output stays in run order
    std::vector<std::future<SolveReport>> futures;
    futures.reserve(runs.size());
    for (const auto& r : runs)
      futures.push_back(std::async(runs.size() > 1 ? std::launch::async
                                                   : std::launch::deferred,
                                   [r] { return execute(r); }));
    std::vector<SolveReport> reports;
    bool any_error = false;
    for (size_t i = 0; i < futures.size(); ++i) {
      try {
        reports.push_back(futures[i].get());
      } catch (const std::exception& ex) {
        any_error = true;
        err << "run " << i << " failed: " << ex.what() << '\n';
        SolveReport rep;
        rep.solver = runs[i].solver == "low" ? SolverKind::LowPrecision
                                             : SolverKind::Refinement;
        rep.p = runs[i].p;
        rep.epsilon = runs[i].eps;
        rep.seed = runs[i].seed;
        rep.outcome = OutcomeKind::Error;
        reports.push_back(rep);
      }
    }

    const bool with_summary = app.got_subcommand("bench");
    const int rc =
        emit(reports, out_path, format, with_summary, out, err);
    if (rc != kExitPrimal) return rc;
    if (any_error) return kExitError;
    for (const auto& r : reports)
      if (r.outcome == OutcomeKind::Certificate) return kExitCertificate;
    return kExitPrimal;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

}  // namespace lpreg::cli
