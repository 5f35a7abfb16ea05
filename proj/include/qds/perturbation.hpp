#pragma once

#include "qds/report.hpp"

namespace qds {

/// Solves the instance with f replaced by f + f_pert. Used when the dual has
/// no critical point with G >= 0 (symmetric / inputless instances): a small
/// linear perturbation breaks the symmetry and restores the certificate.
/// Requires ||f_pert||_inf > 0.
Report perturb_and_solve(const QuarticProblem& p,
                         const Eigen::VectorXd& f_pert,
                         const SolverConfig& cfg,
                         const SolveOptions& opts = {});

/// True iff the report contains no critical point with G(sigma) >= 0, i.e.
/// the canonical transformation could not certify a global minimum.
bool detect_degeneracy(const Report& report);

/// Default perturbation: magnitude 1e-3 in a seeded random direction.
Eigen::VectorXd default_perturbation(const QuarticProblem& p,
                                     std::uint64_t seed);

}  // namespace qds
