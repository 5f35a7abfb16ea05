#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qds/errors.hpp"

namespace qds {

/// A quartic double-well-sum instance
///
///   Pi(x) = 1/2 sum_k beta_k (1/2 x'B^k x - d_k)^2 + 1/2 x'A x - x'f
///
/// with symmetric A and B^k. Instances are immutable after construction and
/// safe to share across threads.
struct QuarticProblem {
  int n = 0;  ///< primal dimension
  int m = 0;  ///< number of quadratic measures
  Eigen::MatrixXd A;
  std::vector<Eigen::MatrixXd> B;
  Eigen::VectorXd beta;
  Eigen::VectorXd d;
  Eigen::VectorXd f;
};

/// Solver knobs. All tolerances strictly positive.
struct SolverConfig {
  int multistart_count = 64;
  int newton_max_iter = 100;
  double newton_tol = 1e-10;          // inf-norm of grad Pi^d
  double definiteness_tol = 1e-9;     // relative eigenvalue threshold
  double dedup_tol = 1e-7;
  double sample_box_halfwidth = 10.0;
  std::uint64_t rng_seed = 42;
  double probe_radius = 1e-2;
  int probe_samples = 100;

  /// Defaults scaled to the instance: 64*m starts, box 10*(1+max|d|).
  static SolverConfig defaults_for(const QuarticProblem& p);

  void validate() const;
};

/// Checks shapes, symmetry (within 1e-12, then symmetrized exactly) and
/// beta_k > 0. Returns the symmetrized problem.
QuarticProblem validate_problem(QuarticProblem p);

/// Rescales (B^k, d^k) so that beta = 1 while Pi is pointwise unchanged:
/// B^k <- sqrt(beta_k) B^k, d^k <- sqrt(beta_k) d^k.
QuarticProblem normalize_beta(const QuarticProblem& p);

/// Parses the problem file format (see serialize_problem) without applying
/// beta normalization. Throws ParseError / DimensionError / DomainError.
QuarticProblem parse_problem(const std::string& text);

/// parse_problem followed by normalize_beta; downstream modules assume
/// beta = 1.
QuarticProblem load_problem(const std::string& text);

QuarticProblem load_problem_file(const std::string& path);

/// Self-describing text form, decimal with 17 significant digits.
/// load_problem(serialize_problem(p)) == p for normalized p.
std::string serialize_problem(const QuarticProblem& p);

/// FNV-1a content hash of the canonical serialization, as 16 hex digits.
std::string problem_digest(const QuarticProblem& p);

/// Formats a double with 17 significant digits (round-trips exactly).
std::string format_double(double v);

bool problems_equal(const QuarticProblem& a, const QuarticProblem& b);

}  // namespace qds
