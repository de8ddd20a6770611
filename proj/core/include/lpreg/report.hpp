#pragma once

#include "lpreg/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lpreg {

enum class SolverKind { LowPrecision, Refinement, SmallP };
enum class OutcomeKind { Primal, Certificate, Error };

std::string to_string(SolverKind k);
std::string to_string(OutcomeKind k);

/// One solver run, serialized as a JSON line with snake_case keys.
struct SolveReport {
  SolverKind solver = SolverKind::Refinement;
  double p = 2.0;
  double epsilon = 1e-8;
  Index n = 0;
  Index d = 0;
  long linear_solves = 0;
  long residual_calls = 0;
  double wall_time_ms = 0.0;
  double objective = 0.0;
  OutcomeKind outcome = OutcomeKind::Primal;
  std::uint64_t seed = 0;

  std::string to_json_line() const;
};

struct ReportGroupStats {
  std::string solver;
  double p = 0.0;
  Index n = 0;
  long count = 0;
  double mean_iters = 0.0;
  double std_iters = 0.0;    // population form
  double mean_time_ms = 0.0;
  double std_time_ms = 0.0;
};

/// Grouped by (solver, p, n). Throws EmptyInput on an empty report set.
std::vector<ReportGroupStats> summarize_reports(
    const std::vector<SolveReport>& reports);

/// CSV with columns group_key, mean_iters, std_iters, mean_time_ms,
/// std_time_ms (one row per group), for plotting.
std::string emit_plot_data(const std::vector<SolveReport>& reports);

}  // namespace lpreg
