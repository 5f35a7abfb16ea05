#include "qds/linalg.hpp"

#include <cmath>

namespace qds {
namespace linalg {

namespace {

double inf_norm(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().rowwise().sum().maxCoeff();
}

void require_symmetric(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw AsymmetricInput("matrix is not square");
  const double scale = M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw AsymmetricInput("matrix is not symmetric");
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

}  // namespace

const char* to_string(DefClass c) {
  switch (c) {
    case DefClass::PosDef: return "PosDef";
    case DefClass::PosSemiDef: return "PosSemiDef";
    case DefClass::NegDef: return "NegDef";
    case DefClass::NegSemiDef: return "NegSemiDef";
    case DefClass::Indefinite: return "Indefinite";
    case DefClass::Zero: return "Zero";
  }
  return "?";
}

int Definiteness::count_negative() const {
  int c = 0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) < -tol_used) ++c;
  return c;
}

int Definiteness::count_positive() const {
  int c = 0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) > tol_used) ++c;
  return c;
}

int Definiteness::count_zero() const {
  return static_cast<int>(eigenvalues.size()) - count_negative() -
         count_positive();
}

Definiteness definiteness(const Eigen::MatrixXd& M, double tol) {
  require_symmetric(M);
  Definiteness out;
  out.eigenvalues = sym_eigenvalues(M);
  out.tol_used = tol * (1.0 + inf_norm(M));
  const int neg = out.count_negative();
  const int pos = out.count_positive();
  const int zero = out.count_zero();
  if (neg == 0 && pos == 0) {
    out.cls = DefClass::Zero;
  } else if (neg == 0) {
    out.cls = zero == 0 ? DefClass::PosDef : DefClass::PosSemiDef;
  } else if (pos == 0) {
    out.cls = zero == 0 ? DefClass::NegDef : DefClass::NegSemiDef;
  } else {
    out.cls = DefClass::Indefinite;
  }
  return out;
}

Inertia inertia(const Eigen::MatrixXd& M, double tol) {
  const Definiteness d = definiteness(M, tol);
  return Inertia{d.count_negative(), d.count_zero(), d.count_positive()};
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M, double tol) {
  if (M.size() == 0) return M.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

SvdFactors svd_decompose(const Eigen::MatrixXd& M, double rank_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdFactors out;
  out.U = svd.matrixU();
  out.R = svd.matrixV().transpose();
  out.D = Eigen::MatrixXd::Zero(M.rows(), M.cols());
  const Eigen::VectorXd& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) out.D(i, i) = sv(i);
  const double cutoff = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
  out.rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++out.rank;
  return out;
}

std::pair<bool, bool> schur_psd_check(const Eigen::MatrixXd& M, int split,
                                      double tol) {
  require_symmetric(M);
  const int n = static_cast<int>(M.rows());
  if (split < 1 || split >= n)
    throw PreconditionViolated("split must cut M into two nonempty blocks");
  const Eigen::MatrixXd M11 = M.topLeftCorner(split, split);
  const Eigen::MatrixXd M12 = M.topRightCorner(split, n - split);
  const Eigen::MatrixXd M22 = M.bottomRightCorner(n - split, n - split);
  if (definiteness(M22, tol).cls != DefClass::PosDef)
    throw SchurPrecondition("trailing block M22 is not positive definite");

  const bool direct = definiteness(M, tol).is_psd();
  const Eigen::MatrixXd schur =
      M11 - M12 * M22.ldlt().solve(M12.transpose());
  const bool via_schur = definiteness(schur, tol).is_psd();
  return {direct, via_schur};
}

std::pair<bool, bool> lemma4_check(const Eigen::MatrixXd& P,
                                   const Eigen::MatrixXd& U,
                                   const Eigen::MatrixXd& D,
                                   double tol) {
  const int n = static_cast<int>(P.rows());
  const int m = static_cast<int>(U.rows());
  if (D.rows() != n || D.cols() != m)
    throw PreconditionViolated("D must be n x m");
  if (definiteness(P, tol).cls != DefClass::NegDef)
    throw PreconditionViolated("P must be negative definite");
  if (definiteness(U, tol).cls != DefClass::PosDef)
    throw PreconditionViolated("U must be positive definite");

  // Infer the border size r from the nonzero pattern of D.
  const double dscale = D.size() == 0 ? 0.0 : D.cwiseAbs().maxCoeff();
  const double zthr = 1e-12 * (1.0 + dscale);
  int r = 0;
  for (int i = 0; i < std::min(n, m); ++i)
    if (D.row(i).cwiseAbs().maxCoeff() > zthr ||
        D.col(i).cwiseAbs().maxCoeff() > zthr)
      r = i + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if ((i >= r || j >= r) && std::abs(D(i, j)) > zthr)
        throw PreconditionViolated("D is not in bordered form");
  if (r > 0) {
    const Eigen::MatrixXd D11 = D.topLeftCorner(r, r);
    if (svd_decompose(D11).rank < r)
      throw PreconditionViolated("D11 must be nonsingular");
    // U must be block-diagonal at the same split.
    if (r < m) {
      if (U.topRightCorner(r, m - r).cwiseAbs().maxCoeff() >
          1e-12 * (1.0 + U.cwiseAbs().maxCoeff()))
        throw PreconditionViolated("U is not block-diagonal at split r");
    }
  }

  const Eigen::MatrixXd lhs_m = P + D * U * D.transpose();
  const Eigen::MatrixXd Pinv = P.ldlt().solve(
      Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd Uinv = U.ldlt().solve(
      Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd rhs_m =
      -D.transpose() * 0.5 * (Pinv + Pinv.transpose()) * D -
      0.5 * (Uinv + Uinv.transpose());
  const bool lhs = definiteness(lhs_m, tol).is_nsd();
  const bool rhs = definiteness(rhs_m, tol).is_nsd();
  return {lhs, rhs};
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& M, double tol) {
  require_symmetric(M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                    (M + M.transpose()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd root = Eigen::VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol * (1.0 + scale))
      throw PreconditionViolated("sqrt_psd: matrix has a negative eigenvalue");
    root(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace linalg
}  // namespace qds
