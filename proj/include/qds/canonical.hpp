#pragma once

#include <Eigen/Dense>

#include "qds/linalg.hpp"
#include "qds/problem.hpp"

namespace qds {

/// Membership of sigma relative to the definiteness of G(sigma):
/// SaPlus for G > 0, SaMinus for G < 0, Boundary when G is singular within
/// tolerance, Outside when G is indefinite.
enum class Region { SaPlus, SaMinus, Boundary, Outside };

const char* to_string(Region r);

/// Total complementary function Xi(x, sigma) and its partial gradients.
struct XiValue {
  double value = 0.0;
  Eigen::VectorXd grad_x;
  Eigen::VectorXd grad_s;
};

/// Pi(x) with exact first and second derivatives.
struct PrimalEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;    ///< G(Lambda(x) - d) + F(x) F(x)'
  Eigen::VectorXd lambda;  ///< Lambda(x), the m quadratic measures
};

/// Pi^d(sigma) with derivatives, region tag and the spectrum of G(sigma).
struct DualEval {
  double value = 0.0;  ///< NaN when f is not in the column space of G
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;  ///< -F(x)' G^-1 F(x) - I at x = G^+ f
  Region region = Region::Outside;
  Eigen::VectorXd g_eigenvalues;  ///< ascending
  Eigen::MatrixXd G;              ///< G(sigma) itself
  Eigen::VectorXd x;              ///< G(sigma)^+ f
  bool feasible = false;          ///< ||G x - f||_inf within tolerance
};

/// Lambda(x): the vector of quadratic measures 1/2 x'B^k x.
Eigen::VectorXd lambda_map(const QuarticProblem& p, const Eigen::VectorXd& x);

/// G(sigma) = A + sum_k sigma_k B^k, exactly symmetric.
Eigen::MatrixXd gmat(const QuarticProblem& p, const Eigen::VectorXd& sigma);

/// F(x) = [B^1 x, ..., B^m x], n x m.
Eigen::MatrixXd fmat(const QuarticProblem& p, const Eigen::VectorXd& x);

PrimalEval primal_eval(const QuarticProblem& p, const Eigen::VectorXd& x);

DualEval dual_eval(const QuarticProblem& p, const Eigen::VectorXd& sigma,
                   double tol = 1e-9);

/// grad Pi^d by the m separate quadratic forms
/// 1/2 f' G^-1 B^k G^-1 f - sigma_k - d_k (cross-check route).
Eigen::VectorXd dual_grad_quadratic_forms(const QuarticProblem& p,
                                          const Eigen::VectorXd& sigma,
                                          double tol = 1e-9);

XiValue xi_eval(const QuarticProblem& p, const Eigen::VectorXd& x,
                const Eigen::VectorXd& sigma);

/// Complementary gap function 1/2 x' G(sigma) x.
double gap_eval(const QuarticProblem& p, const Eigen::VectorXd& x,
                const Eigen::VectorXd& sigma);

/// x = G(sigma)^+ f. Throws InfeasibleDual when the residual
/// ||G x - f||_inf exceeds 1e-8 * (1 + ||f||_inf).
Eigen::VectorXd recover_primal(const QuarticProblem& p,
                               const Eigen::VectorXd& sigma,
                               double tol = 1e-9);

}  // namespace qds
