#pragma once

#include <utility>

#include <Eigen/Dense>

#include "qds/errors.hpp"

namespace qds {
namespace linalg {

enum class DefClass { PosDef, PosSemiDef, NegDef, NegSemiDef, Indefinite, Zero };

const char* to_string(DefClass c);

/// Sign classification of a symmetric matrix by its spectrum.
struct Definiteness {
  DefClass cls = DefClass::Zero;
  Eigen::VectorXd eigenvalues;  ///< ascending
  double tol_used = 0.0;        ///< absolute threshold applied to eigenvalues

  int count_negative() const;
  int count_zero() const;
  int count_positive() const;

  bool is_psd() const {
    return cls == DefClass::PosDef || cls == DefClass::PosSemiDef ||
           cls == DefClass::Zero;
  }
  bool is_nsd() const {
    return cls == DefClass::NegDef || cls == DefClass::NegSemiDef ||
           cls == DefClass::Zero;
  }
};

/// Classifies a symmetric matrix with threshold tol*(1+||M||_inf).
/// Throws AsymmetricInput if M is visibly asymmetric.
Definiteness definiteness(const Eigen::MatrixXd& M, double tol = 1e-9);

/// Eigenvalue inertia (negative, zero, positive) under the same threshold
/// policy as definiteness().
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
  bool operator==(const Inertia&) const = default;
};

Inertia inertia(const Eigen::MatrixXd& M, double tol = 1e-9);

/// Moore-Penrose pseudo-inverse with singular-value cutoff tol*sigma_max.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M, double tol = 1e-12);

/// Factors M = U * D * R with orthogonal U (n x n), R (m x m) and
/// nonincreasing nonnegative rectangular-diagonal D.
struct SvdFactors {
  Eigen::MatrixXd U;
  Eigen::MatrixXd D;
  Eigen::MatrixXd R;
  int rank = 0;
};

SvdFactors svd_decompose(const Eigen::MatrixXd& M, double rank_tol = 1e-12);

/// Tests M >= 0 two ways: by eigenvalues and through the Schur complement
/// M11 - M12 M22^-1 M21 (M22 = trailing block after row/col `split`).
/// Requires M22 > 0 (SchurPrecondition otherwise).
std::pair<bool, bool> schur_psd_check(const Eigen::MatrixXd& M, int split,
                                      double tol = 1e-9);

/// Evaluates both sides of the bordered-matrix equivalence
///   P + D U D' <= 0  <=>  -D' P^-1 D - U^-1 <= 0
/// for P < 0 (n x n), U > 0 block-diagonal (m x m) and D (n x m) whose only
/// nonzero block is a nonsingular leading r x r corner. Returns the two
/// booleans; the equivalence itself is the caller's property to assert.
std::pair<bool, bool> lemma4_check(const Eigen::MatrixXd& P,
                                   const Eigen::MatrixXd& U,
                                   const Eigen::MatrixXd& D,
                                   double tol = 1e-9);

/// Symmetric positive-semidefinite square root.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& M, double tol = 1e-12);

}  // namespace linalg
}  // namespace qds
