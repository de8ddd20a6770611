#include "lpreg/report.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace lpreg {

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::LowPrecision: return "low_precision";
    case SolverKind::Refinement: return "refinement";
    case SolverKind::SmallP: return "small_p";
  }
  return "unknown";
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Primal: return "primal";
    case OutcomeKind::Certificate: return "certificate";
    case OutcomeKind::Error: return "error";
  }
  return "unknown";
}

std::string SolveReport::to_json_line() const {
  nlohmann::ordered_json j;
  j["solver"] = to_string(solver);
  j["p"] = p;
  j["epsilon"] = epsilon;
  j["n"] = n;
  j["d"] = d;
  j["linear_solves"] = linear_solves;
  j["residual_calls"] = residual_calls;
  j["wall_time_ms"] = wall_time_ms;
  j["objective"] = objective;
  j["outcome"] = to_string(outcome);
  j["seed"] = seed;
  return j.dump();
}

std::vector<ReportGroupStats> summarize_reports(
    const std::vector<SolveReport>& reports) {
  if (reports.empty()) throw EmptyInput("summarize_reports: no reports");
  std::map<std::tuple<std::string, double, Index>,
           std::vector<const SolveReport*>>
      groups;
  for (const auto& r : reports)
    groups[{to_string(r.solver), r.p, r.n}].push_back(&r);

  std::vector<ReportGroupStats> out;
  for (const auto& [key, rs] : groups) {
    ReportGroupStats g;
    std::tie(g.solver, g.p, g.n) = key;
    g.count = static_cast<long>(rs.size());
    double si = 0.0, st = 0.0;
    for (const auto* r : rs) {
      si += double(r->linear_solves);
      st += r->wall_time_ms;
    }
    g.mean_iters = si / double(g.count);
    g.mean_time_ms = st / double(g.count);
    double vi = 0.0, vt = 0.0;
    for (const auto* r : rs) {
      vi += (double(r->linear_solves) - g.mean_iters) *
            (double(r->linear_solves) - g.mean_iters);
      vt += (r->wall_time_ms - g.mean_time_ms) *
            (r->wall_time_ms - g.mean_time_ms);
    }
    g.std_iters = std::sqrt(vi / double(g.count));
    g.std_time_ms = std::sqrt(vt / double(g.count));
    out.push_back(std::move(g));
  }
  return out;
}

std::string emit_plot_data(const std::vector<SolveReport>& reports) {
  const auto groups = summarize_reports(reports);
  std::ostringstream os;
  os << "group_key,mean_iters,std_iters,mean_time_ms,std_time_ms\n";
  for (const auto& g : groups) {
    os << g.solver << ":p=" << g.p << ":n=" << g.n << ',' << g.mean_iters
       << ',' << g.std_iters << ',' << g.mean_time_ms << ',' << g.std_time_ms
       << '\n';
  }
  return os.str();
}

}  // namespace lpreg
