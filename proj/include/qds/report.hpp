#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qds/oracle.hpp"
#include "qds/triality.hpp"

namespace qds {

/// One solved critical pair with its verdict.
struct ReportPair {
  CriticalPair pair;
  TrialityVerdict verdict;
};

struct Diagnostics {
  int seeds_total = 0;
  int newton_converged = 0;
  int newton_failed = 0;
  int dedup_merged = 0;
  int outside_count = 0;      ///< critical points with indefinite G
  int infeasible_pairs = 0;   ///< dual points whose x could not be recovered
};

/// Full solve output. Pairs are sorted by primal value ascending, so a
/// GlobalMin pair (if any) comes first.
struct Report {
  std::string problem_digest;
  bool perturbed = false;
  Eigen::VectorXd f_pert;     ///< empty when not perturbed
  double f_pert_norm = 0.0;
  bool degenerate = false;    ///< no critical point with G >= 0
  std::vector<ReportPair> pairs;
  Diagnostics diagnostics;
  std::optional<oracle::ValidationSummary> oracle_summary;
  SolverConfig config_echo;
};

struct SolveOptions {
  bool verify = false;  ///< run the oracle cross-validation
};

/// Full pipeline: find dual critical points, recover pairs, classify,
/// assemble the report (and cross-validate when requested).
Report solve_problem(const QuarticProblem& p, const SolverConfig& cfg,
                     const SolveOptions& opts = {});

/// Structured text form; deterministic, 17 significant digits.
std::string serialize_report(const Report& r);

/// Parses serialize_report output back into a Report (round-trip).
Report parse_report(const std::string& text);

bool reports_equal(const Report& a, const Report& b);

/// Human-readable rendering for the terminal.
std::string render_report_text(const Report& r, const QuarticProblem& p);

}  // namespace qds
