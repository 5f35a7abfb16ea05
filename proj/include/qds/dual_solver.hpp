#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qds/canonical.hpp"
#include "qds/problem.hpp"

namespace qds {

enum class DualClass { LocalMin, LocalMax, Saddle, Degenerate };

const char* to_string(DualClass c);

/// A stationary point of Pi^d with its region tag and Hessian inertia.
struct DualCriticalPoint {
  Eigen::VectorXd sigma;
  Region region = Region::Outside;
  DualClass dual_class = DualClass::Degenerate;
  double grad_norm = 0.0;  ///< inf-norm of grad Pi^d, re-evaluated
  linalg::Inertia hess_inertia;
  double dual_value = 0.0;
};

enum class NewtonStatus { Converged, NoConvergence, Infeasible };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::NoConvergence;
  std::optional<DualCriticalPoint> point;
  int iterations = 0;
};

struct SolverStats {
  int seeds_total = 0;
  int newton_converged = 0;
  int newton_failed = 0;
  int dedup_merged = 0;
};

/// Diagonal structure of an instance after an orthogonal change of primal
/// coordinates: A and every B^k diagonal, each coordinate coupled to at most
/// one measure. The dual problem is invariant under the transformation, so
/// sigma-space results carry over verbatim.
struct SeparableStructure {
  Eigen::MatrixXd Q;        ///< x = Q z
  Eigen::VectorXd a;        ///< diag of Q'AQ
  Eigen::MatrixXd b;        ///< b(k, i) = (Q'B^k Q)_ii
  Eigen::VectorXd f;        ///< Q'f
  std::vector<std::vector<double>> axis_poles;  ///< per measure, sorted
};

/// Attempts to jointly diagonalize {A, B^1..B^m} and verify that measure
/// supports are disjoint. Returns nullopt when the structure is absent.
std::optional<SeparableStructure> detect_separable(const QuarticProblem& p);

/// Exact dual critical points of a separable instance: per-axis polynomial
/// roots combined across axes. Each point is polished against grad Pi^d.
std::vector<Eigen::VectorXd> enumerate_separable(
    const QuarticProblem& p, const SeparableStructure& s,
    double newton_tol = 1e-12);

/// Real roots of sum_i c(i) t^i by companion-matrix eigenvalues.
std::vector<double> real_polynomial_roots(const Eigen::VectorXd& coeffs);

/// Deterministic candidate starting points: structured seeds, orthant
/// probes, pole-cell points when the structure is computable, then seeded
/// box samples filling up to multistart_count.
std::vector<Eigen::VectorXd> seed_candidates(const QuarticProblem& p,
                                             const SolverConfig& cfg);

/// Damped Newton on grad Pi^d = 0. Steps never cross a pole: a trial point
/// is rejected when the inertia of G changes or |det G| collapses.
NewtonResult newton_refine(const QuarticProblem& p,
                           const Eigen::VectorXd& sigma0,
                           const SolverConfig& cfg);

/// Multistart search: newton_refine from every seed, deduplicated by
/// ||s_i - s_j||_inf <= dedup_tol*(1+||s_i||_inf), sorted by dual value
/// descending (ties by lexicographic sigma). Deterministic for a fixed
/// rng_seed. Includes Outside-region points; callers filter as needed.
std::vector<DualCriticalPoint> find_critical_points(const QuarticProblem& p,
                                                    const SolverConfig& cfg,
                                                    SolverStats* stats = nullptr);

}  // namespace qds
