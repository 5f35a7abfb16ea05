#include "qds/triality.hpp"

#include <cmath>

#include "qds/rng.hpp"

namespace qds {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::GlobalMin: return "GlobalMin";
    case VerdictKind::LocalMin: return "LocalMin";
    case VerdictKind::LocalMax: return "LocalMax";
    case VerdictKind::SaddlePrimal: return "SaddlePrimal";
    case VerdictKind::SaddleDual: return "SaddleDual";
    case VerdictKind::WeakDoubleMinPrimalRestricted:
      return "WeakDoubleMinPrimalRestricted";
    case VerdictKind::WeakDoubleMinDualRestricted:
      return "WeakDoubleMinDualRestricted";
    case VerdictKind::Unclassified: return "Unclassified";
  }
  return "?";
}

const char* to_string(TheoremBranch b) {
  switch (b) {
    case TheoremBranch::MinMax: return "MinMax";
    case TheoremBranch::DoubleMax: return "DoubleMax";
    case TheoremBranch::DoubleMinStrong: return "DoubleMinStrong";
    case TheoremBranch::DoubleMinWeak_mLTn: return "DoubleMinWeak_mLTn";
    case TheoremBranch::DoubleMinWeak_mGTn: return "DoubleMinWeak_mGTn";
    case TheoremBranch::Excluded: return "Excluded";
  }
  return "?";
}

bool CriticalPair::all_checks_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

CriticalPair make_pair(const QuarticProblem& p, const DualCriticalPoint& dcp,
                       const SolverConfig& cfg) {
  CriticalPair pair;
  pair.sigma = dcp.sigma;
  pair.dual = dual_eval(p, dcp.sigma, cfg.definiteness_tol);
  if (!pair.dual.feasible)
    throw InfeasibleDual("pair recovery: f not in column space of G(sigma)");
  pair.x = pair.dual.x;
  pair.primal = primal_eval(p, pair.x);
  pair.F = fmat(p, pair.x);
  pair.gap_residual = std::abs(pair.primal.value - pair.dual.value);
  pair.dual_class = dcp.dual_class;

  const auto add_check = [&](const std::string& name, double magnitude,
                             double tol) {
    pair.checks.push_back({name, magnitude, tol, magnitude <= tol});
  };
  // Tolerances slightly above newton_tol: the re-evaluated gradients see
  // fresh rounding.
  add_check("primal_grad_inf_norm", pair.primal.grad.cwiseAbs().maxCoeff(),
            std::max(1e3 * cfg.newton_tol,
                     1e-12 * (1.0 + std::abs(pair.primal.value))));
  add_check("dual_grad_inf_norm", pair.dual.grad.cwiseAbs().maxCoeff(),
            10.0 * cfg.newton_tol);
  add_check("complementary_gap", pair.gap_residual,
            1e-8 * (1.0 + std::abs(pair.primal.value)));
  add_check("sigma_matches_lambda_minus_d",
            (pair.sigma - (pair.primal.lambda - p.d)).cwiseAbs().maxCoeff(),
            1e-8 * (1.0 + pair.sigma.cwiseAbs().maxCoeff()));
  return pair;
}

namespace {

std::string describe_inertia(const linalg::Inertia& in) {
  return "(" + std::to_string(in.negative) + "," + std::to_string(in.zero) +
         "," + std::to_string(in.positive) + ")";
}

}  // namespace

TrialityVerdict classify_pair(const CriticalPair& pair,
                              const SolverConfig& cfg) {
  TrialityVerdict v;
  const int n = static_cast<int>(pair.x.size());
  const int m = static_cast<int>(pair.sigma.size());

  const linalg::Definiteness gdef =
      linalg::definiteness(pair.dual.G, cfg.definiteness_tol);

  // Canonical min-max: any critical point with G >= 0 certifies the global
  // minimum; Hessian non-degeneracy is not needed for this branch.
  if (pair.dual.region == Region::SaPlus ||
      (pair.dual.region == Region::Boundary && gdef.is_psd())) {
    v.kind = VerdictKind::GlobalMin;
    v.branch = TheoremBranch::MinMax;
    v.notes = pair.dual.region == Region::Boundary
                  ? "G(sigma) singular but PSD: boundary of Sa+"
                  : "";
    return v;
  }

  if (pair.dual.region == Region::Outside) {
    v.kind = VerdictKind::Unclassified;
    v.branch = TheoremBranch::Excluded;
    v.notes = "G(sigma) indefinite: outside Sa+ and Sa-, "
              "not covered by the triality theory";
    return v;
  }
  if (pair.dual.region == Region::Boundary) {
    v.kind = VerdictKind::Unclassified;
    v.branch = TheoremBranch::Excluded;
    v.notes = "G(sigma) singular and not PSD: boundary case outside Sa-";
    return v;
  }

  // From here on sigma lies in Sa- (G < 0).
  const linalg::Inertia dual_in =
      linalg::inertia(pair.dual.hess, cfg.definiteness_tol);
  const linalg::Inertia primal_in =
      linalg::inertia(pair.primal.hess, cfg.definiteness_tol);

  if (dual_in.zero > 0) {
    v.kind = VerdictKind::Unclassified;
    v.branch = TheoremBranch::Excluded;
    v.notes = "degenerate dual Hessian, inertia " + describe_inertia(dual_in);
    return v;
  }

  const bool dual_local_min = dual_in.negative == 0;
  const bool dual_local_max = dual_in.positive == 0;
  const bool primal_pos_def = primal_in.negative == 0 && primal_in.zero == 0;
  const bool primal_indefinite = primal_in.negative > 0 && primal_in.positive > 0;

  if (dual_local_max) {
    v.kind = VerdictKind::LocalMax;
    v.branch = TheoremBranch::DoubleMax;
    if (primal_in.zero > 0)
      v.notes = "primal Hessian near-singular, inertia " +
                describe_inertia(primal_in);
    return v;
  }

  if (dual_local_min) {
    if (primal_in.zero > 0) {
      v.kind = VerdictKind::Unclassified;
      v.branch = TheoremBranch::Excluded;
      v.notes = "degenerate primal Hessian, inertia " +
                describe_inertia(primal_in);
      return v;
    }
    if (n == m) {
      v.kind = VerdictKind::LocalMin;
      v.branch = TheoremBranch::DoubleMinStrong;
      const int rank_f = linalg::svd_decompose(pair.F).rank;
      if (rank_f < m)
        v.notes = "inconsistency: F(x) rank " + std::to_string(rank_f) +
                  " < m despite dual local min";
      return v;
    }
    if (m < n) {
      v.kind = VerdictKind::WeakDoubleMinPrimalRestricted;
      v.branch = TheoremBranch::DoubleMinWeak_mLTn;
      v.certificate = build_subspace_P(pair, cfg.definiteness_tol);
      v.notes = "x is a saddle point of Pi; double-min holds on the "
                "m-dimensional subspace spanned by P";
      return v;
    }
    // m > n cannot host a dual local minimum (rank F <= n < m); reaching
    // here means a tolerance artifact.
    v.kind = VerdictKind::Unclassified;
    v.branch = TheoremBranch::Excluded;
    v.notes = "dual local min with m > n contradicts rank(F) <= n; "
              "dual inertia " + describe_inertia(dual_in);
    return v;
  }

  // Dual saddle.
  if (m > n && primal_pos_def) {
    v.kind = VerdictKind::WeakDoubleMinDualRestricted;
    v.branch = TheoremBranch::DoubleMinWeak_mGTn;
    v.certificate = build_subspace_Q(pair, cfg.definiteness_tol);
    v.notes = "sigma is a saddle point of Pi^d; double-min holds on the "
              "n-dimensional subspace spanned by Q";
    return v;
  }
  if (primal_indefinite) {
    v.kind = VerdictKind::SaddlePrimal;
    v.branch = TheoremBranch::Excluded;
    v.notes = "both Hessians indefinite; primal inertia " +
              describe_inertia(primal_in) + ", dual inertia " +
              describe_inertia(dual_in);
    return v;
  }
  v.kind = VerdictKind::SaddleDual;
  v.branch = TheoremBranch::Excluded;
  v.notes = "dual Hessian indefinite " + describe_inertia(dual_in) +
            ", primal inertia " + describe_inertia(primal_in);
  return v;
}

SubspaceCertificate build_subspace_P(const CriticalPair& pair, double tol) {
  const int n = static_cast<int>(pair.x.size());
  const int m = static_cast<int>(pair.sigma.size());
  if (m >= n) throw PreconditionViolated("P certificate requires m < n");
  if (linalg::definiteness(pair.dual.G, tol).cls != linalg::DefClass::NegDef)
    throw PreconditionViolated("P certificate requires G(sigma) < 0");
  if (linalg::definiteness(pair.dual.hess, tol).count_negative() > 0)
    throw PreconditionViolated("P certificate requires dual Hessian >= 0");

  // T0 = (-G)^{-1/2} maps G to -I; the eigenvectors of T0 F F' T0 then
  // split the a_i > 0 directions from the null ones.
  const Eigen::MatrixXd C = linalg::sqrt_psd(-pair.dual.G);
  const Eigen::MatrixXd T0 = C.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd K = T0 * pair.F;  // n x m
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K * K.transpose());

  // Ascending eigenvalues: the top m belong to range(K).
  const Eigen::VectorXd ev = es.eigenvalues();
  const double escale = ev.cwiseAbs().maxCoeff();
  for (int i = n - m; i < n; ++i) {
    if (ev(i) <= tol * (1.0 + escale))
      throw RankDeficientF("rank F(x) < m contradicts the dual-local-min "
                           "hypothesis");
  }
  Eigen::MatrixXd W1(n, m);
  for (int j = 0; j < m; ++j) W1.col(j) = es.eigenvectors().col(n - 1 - j);

  SubspaceCertificate cert;
  cert.side = SubspaceCertificate::Side::PrimalP;
  cert.basis = T0 * W1;  // P = T J, first m columns of T = T0 W
  cert.rank = linalg::svd_decompose(cert.basis).rank;
  const Eigen::MatrixXd restricted =
      cert.basis.transpose() * pair.primal.hess * cert.basis;
  cert.restricted_hessian_eigs =
      linalg::definiteness(restricted, tol).eigenvalues;
  return cert;
}

SubspaceCertificate build_subspace_Q(const CriticalPair& pair, double tol) {
  const int n = static_cast<int>(pair.x.size());
  const int m = static_cast<int>(pair.sigma.size());
  if (m <= n) throw PreconditionViolated("Q certificate requires m > n");
  if (linalg::definiteness(pair.dual.G, tol).cls != linalg::DefClass::NegDef)
    throw PreconditionViolated("Q certificate requires G(sigma) < 0");
  if (linalg::definiteness(pair.primal.hess, tol).count_negative() > 0)
    throw PreconditionViolated("Q certificate requires primal Hessian >= 0");

  // With K = (-G)^{-1/2} F, the dual Hessian is K'K - I; its restriction to
  // range(K') = range(F') is diagonalized by the right singular vectors.
  const Eigen::MatrixXd C = linalg::sqrt_psd(-pair.dual.G);
  const Eigen::MatrixXd K =
      C.ldlt().solve(Eigen::MatrixXd::Identity(n, n)) * pair.F;  // n x m
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      K, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  if (rank < n)
    throw RankDeficientF("rank F(x) < n contradicts the primal-local-min "
                         "hypothesis");

  SubspaceCertificate cert;
  cert.side = SubspaceCertificate::Side::DualQ;
  cert.basis = svd.matrixV().leftCols(n);  // m x n, orthonormal columns
  cert.rank = linalg::svd_decompose(cert.basis).rank;
  const Eigen::MatrixXd restricted =
      cert.basis.transpose() * pair.dual.hess * cert.basis;
  cert.restricted_hessian_eigs =
      linalg::definiteness(restricted, tol).eigenvalues;
  return cert;
}

ProbeReport restricted_probe(const QuarticProblem& p, const CriticalPair& pair,
                             const SubspaceCertificate& cert,
                             const SolverConfig& cfg) {
  ProbeReport rep;
  const int dim = static_cast<int>(cert.basis.cols());
  rep.argmin = Eigen::VectorXd::Zero(dim);
  rep.samples = cfg.probe_samples;

  const bool primal_side = cert.side == SubspaceCertificate::Side::PrimalP;
  const double base = primal_side
                          ? pair.primal.value
                          : pair.dual.value;
  const auto eval = [&](const Eigen::VectorXd& t) -> double {
    if (primal_side) return primal_eval(p, pair.x + cert.basis * t).value;
    const DualEval de =
        dual_eval(p, pair.sigma + cert.basis * t, cfg.definiteness_tol);
    return de.feasible ? de.value : std::numeric_limits<double>::quiet_NaN();
  };

  rep.min_delta = 0.0;
  Rng rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ull);
  for (int s = 0; s < cfg.probe_samples; ++s) {
    Eigen::VectorXd dir = rng.normal_vector(dim);
    const double len = dir.norm();
    if (len == 0.0) continue;
    dir /= len;
    // Radii swept from the edge inward so tiny steps are covered too.
    const double frac = (s % 10 + 1) / 10.0;
    const Eigen::VectorXd t = cfg.probe_radius * frac * dir;
    const double val = eval(t);
    if (!std::isfinite(val)) continue;
    const double delta = val - base;
    if (delta < rep.min_delta) {
      rep.min_delta = delta;
      rep.argmin = t;
    }
  }
  rep.interior_minimum_at_zero =
      rep.min_delta >= -1e-12 * (1.0 + std::abs(base));
  return rep;
}

}  // namespace qds
