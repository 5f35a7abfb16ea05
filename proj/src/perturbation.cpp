#include "qds/perturbation.hpp"

#include "qds/rng.hpp"

namespace qds {

Report perturb_and_solve(const QuarticProblem& p,
                         const Eigen::VectorXd& f_pert,
                         const SolverConfig& cfg, const SolveOptions& opts) {
  if (f_pert.size() != p.n)
    throw DimensionError("f_pert must have length n");
  if (!(f_pert.cwiseAbs().maxCoeff() > 0.0))
    throw PreconditionViolated("f_pert must be nonzero");

  QuarticProblem q = p;
  q.f += f_pert;
  Report rep = solve_problem(q, cfg, opts);
  rep.perturbed = true;
  rep.f_pert = f_pert;
  rep.f_pert_norm = f_pert.norm();
  return rep;
}

bool detect_degeneracy(const Report& report) {
  for (const auto& rp : report.pairs)
    if (rp.verdict.branch == TheoremBranch::MinMax) return false;
  return true;
}

Eigen::VectorXd default_perturbation(const QuarticProblem& p,
                                     std::uint64_t seed) {
  Rng rng(seed ^ 0x7e27b2b5ull);
  Eigen::VectorXd dir = rng.normal_vector(p.n);
  const double len = dir.norm();
  if (len == 0.0) {
    dir = Eigen::VectorXd::Zero(p.n);
    dir(0) = 1.0;
    return 1e-3 * dir;
  }
  return (1e-3 / len) * dir;
}

}  // namespace qds
