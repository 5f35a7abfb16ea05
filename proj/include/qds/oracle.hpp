#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qds/problem.hpp"

namespace qds {

struct Report;  // report.hpp

namespace oracle {

/// Pi(x) evaluated directly from the problem data, independent of the
/// canonical-duality code paths.
double primal_value(const QuarticProblem& p, const Eigen::VectorXd& x);

/// grad Pi from the defining sums (same independence caveat).
Eigen::VectorXd primal_grad(const QuarticProblem& p, const Eigen::VectorXd& x);

/// Central-difference Hessian of the oracle gradient.
Eigen::MatrixXd primal_hess_fd(const QuarticProblem& p,
                               const Eigen::VectorXd& x, double h = 1e-5);

enum class Side { Primal, Dual };

/// Max relative error of analytic gradient and Hessian against central
/// finite differences of step h.
double fd_check(const QuarticProblem& p, const Eigen::VectorXd& point,
                Side side, double h);

struct GridResult {
  Eigen::VectorXd point;
  double value = 0.0;
};

/// Exhaustive scan over an axis-aligned box (n <= 3), resolution points per
/// axis, followed by 50 descent steps from the best cell.
GridResult grid_scan(const QuarticProblem& p,
                     const std::vector<std::pair<double, double>>& box,
                     int resolution);

/// Seeded multistart gradient descent with Armijo backtracking; returns
/// deduplicated local minimizers (points with PSD finite-difference
/// Hessian), sorted by value then lexicographically.
std::vector<Eigen::VectorXd> multistart_descent(const QuarticProblem& p,
                                                const SolverConfig& cfg);

struct ValidationCheck {
  std::string name;
  bool ok = true;
  bool skipped = false;
  double magnitude = 0.0;
  std::string detail;
};

struct ValidationSummary {
  std::vector<ValidationCheck> checks;
  int mismatches = 0;

  bool all_ok() const { return mismatches == 0; }
};

/// Cross-validates a completed report: (a) every oracle minimizer matches a
/// recovered x, (b) the GlobalMin beats the grid scan, (c) verdict kinds
/// agree with oracle Hessian inertia.
ValidationSummary cross_validate(const Report& report, const QuarticProblem& p,
                                 const SolverConfig& cfg);

}  // namespace oracle
}  // namespace qds
