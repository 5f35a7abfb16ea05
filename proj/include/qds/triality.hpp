#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qds/canonical.hpp"
#include "qds/dual_solver.hpp"

namespace qds {

/// One named consistency check on a critical pair.
struct InvariantCheck {
  std::string name;
  double magnitude = 0.0;
  double tolerance = 0.0;
  bool ok = true;
};

/// A matched (x, sigma) pair with both evaluations and the residual of the
/// complementary-dual identity Pi(x) = Pi^d(sigma).
struct CriticalPair {
  Eigen::VectorXd x;
  Eigen::VectorXd sigma;
  PrimalEval primal;
  DualEval dual;
  Eigen::MatrixXd F;  ///< F(x), n x m
  double gap_residual = 0.0;
  DualClass dual_class = DualClass::Degenerate;
  std::vector<InvariantCheck> checks;

  bool all_checks_ok() const;
};

enum class VerdictKind {
  GlobalMin,
  LocalMin,
  LocalMax,
  SaddlePrimal,
  SaddleDual,
  WeakDoubleMinPrimalRestricted,
  WeakDoubleMinDualRestricted,
  Unclassified,
};

enum class TheoremBranch {
  MinMax,
  DoubleMax,
  DoubleMinStrong,
  DoubleMinWeak_mLTn,
  DoubleMinWeak_mGTn,
  Excluded,
};

const char* to_string(VerdictKind k);
const char* to_string(TheoremBranch b);

/// Basis of the restricted subspace through which the weak double-min
/// statement holds: P (n x m, case m < n) or Q (m x n, case m > n).
struct SubspaceCertificate {
  enum class Side { PrimalP, DualQ };
  Side side = Side::PrimalP;
  Eigen::MatrixXd basis;
  int rank = 0;
  Eigen::VectorXd restricted_hessian_eigs;  ///< ascending
};

struct TrialityVerdict {
  VerdictKind kind = VerdictKind::Unclassified;
  TheoremBranch branch = TheoremBranch::Excluded;
  std::optional<SubspaceCertificate> certificate;
  std::string notes;
};

/// Recovers x from a dual critical point and evaluates every pair
/// invariant; violations land in CriticalPair::checks rather than throwing.
/// Throws InfeasibleDual when x cannot be recovered at all.
CriticalPair make_pair(const QuarticProblem& p, const DualCriticalPoint& dcp,
                       const SolverConfig& cfg);

/// Applies the classification table of the (refined) triality theory.
TrialityVerdict classify_pair(const CriticalPair& pair,
                              const SolverConfig& cfg);

/// P certificate for m < n: G(sigma) < 0, dual Hessian >= 0. Built from the
/// congruence by the symmetric square root of -G.
SubspaceCertificate build_subspace_P(const CriticalPair& pair,
                                     double tol = 1e-9);

/// Q certificate for m > n: G(sigma) < 0, primal Hessian >= 0. Orthonormal
/// basis of range(F') aligned by the analogous congruence.
SubspaceCertificate build_subspace_Q(const CriticalPair& pair,
                                     double tol = 1e-9);

struct ProbeReport {
  double min_delta = 0.0;      ///< min over samples of phi(t) - phi(0)
  Eigen::VectorXd argmin;      ///< t achieving the minimum
  int samples = 0;
  bool interior_minimum_at_zero = false;
};

/// Samples the restricted function phi(t) = Pi(x + P t) (or
/// psi(t) = Pi^d(sigma + Q t)) over ||t|| <= probe_radius.
ProbeReport restricted_probe(const QuarticProblem& p, const CriticalPair& pair,
                             const SubspaceCertificate& cert,
                             const SolverConfig& cfg);

}  // namespace qds
