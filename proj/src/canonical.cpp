#include "qds/canonical.hpp"

#include <cmath>
#include <limits>

namespace qds {

namespace {

void check_x_dim(const QuarticProblem& p, const Eigen::VectorXd& x) {
  if (x.size() != p.n) throw DimensionError("x must have length n");
}

void check_s_dim(const QuarticProblem& p, const Eigen::VectorXd& s) {
  if (s.size() != p.m) throw DimensionError("sigma must have length m");
}

bool residual_feasible(const Eigen::MatrixXd& G, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& f) {
  const double fscale = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  return (G * x - f).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + fscale);
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::SaPlus: return "SaPlus";
    case Region::SaMinus: return "SaMinus";
    case Region::Boundary: return "Boundary";
    case Region::Outside: return "Outside";
  }
  return "?";
}

Eigen::VectorXd lambda_map(const QuarticProblem& p, const Eigen::VectorXd& x) {
  check_x_dim(p, x);
  Eigen::VectorXd xi(p.m);
  for (int k = 0; k < p.m; ++k) xi(k) = 0.5 * x.dot(p.B[k] * x);
  return xi;
}

Eigen::MatrixXd gmat(const QuarticProblem& p, const Eigen::VectorXd& sigma) {
  check_s_dim(p, sigma);
  Eigen::MatrixXd G = p.A;
  for (int k = 0; k < p.m; ++k) G += sigma(k) * p.B[k];
  return 0.5 * (G + G.transpose()).eval();
}

Eigen::MatrixXd fmat(const QuarticProblem& p, const Eigen::VectorXd& x) {
  check_x_dim(p, x);
  Eigen::MatrixXd F(p.n, p.m);
  for (int k = 0; k < p.m; ++k) F.col(k) = p.B[k] * x;
  return F;
}

PrimalEval primal_eval(const QuarticProblem& p, const Eigen::VectorXd& x) {
  check_x_dim(p, x);
  PrimalEval out;
  out.lambda = lambda_map(p, x);
  const Eigen::VectorXd r = out.lambda - p.d;
  out.value = 0.5 * r.squaredNorm() + 0.5 * x.dot(p.A * x) - x.dot(p.f);
  out.grad = p.A * x - p.f;
  for (int k = 0; k < p.m; ++k) out.grad += r(k) * (p.B[k] * x);
  const Eigen::MatrixXd F = fmat(p, x);
  out.hess = gmat(p, r) + F * F.transpose();
  return out;
}

DualEval dual_eval(const QuarticProblem& p, const Eigen::VectorXd& sigma,
                   double tol) {
  check_s_dim(p, sigma);
  DualEval out;
  out.G = gmat(p, sigma);

  const linalg::Definiteness def = linalg::definiteness(out.G, tol);
  out.g_eigenvalues = def.eigenvalues;
  switch (def.cls) {
    case linalg::DefClass::PosDef: out.region = Region::SaPlus; break;
    case linalg::DefClass::NegDef: out.region = Region::SaMinus; break;
    case linalg::DefClass::Indefinite: out.region = Region::Outside; break;
    default: out.region = Region::Boundary; break;  // singular within tol
  }

  const bool singular = def.count_zero() > 0;
  if (singular) {
    out.x = linalg::pseudo_inverse(out.G, tol) * p.f;
  } else {
    out.x = out.G.ldlt().solve(p.f);
    if (!out.x.allFinite()) out.x = linalg::pseudo_inverse(out.G, tol) * p.f;
  }
  out.feasible = residual_feasible(out.G, out.x, p.f);

  const Eigen::VectorXd lam = lambda_map(p, out.x);
  out.grad = lam - sigma - p.d;

  const Eigen::MatrixXd F = fmat(p, out.x);
  Eigen::MatrixXd Ginv_F(p.n, p.m);
  if (singular) {
    Ginv_F = linalg::pseudo_inverse(out.G, tol) * F;
  } else {
    Ginv_F = out.G.ldlt().solve(F);
  }
  out.hess = -F.transpose() * Ginv_F - Eigen::MatrixXd::Identity(p.m, p.m);
  out.hess = 0.5 * (out.hess + out.hess.transpose()).eval();

  if (out.feasible) {
    out.value = -0.5 * p.f.dot(out.x) - 0.5 * sigma.squaredNorm() -
                sigma.dot(p.d);
  } else {
    out.value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Eigen::VectorXd dual_grad_quadratic_forms(const QuarticProblem& p,
                                          const Eigen::VectorXd& sigma,
                                          double tol) {
  check_s_dim(p, sigma);
  const Eigen::MatrixXd G = gmat(p, sigma);
  const Eigen::MatrixXd Ginv = linalg::pseudo_inverse(G, tol);
  const Eigen::VectorXd y = Ginv * p.f;
  Eigen::VectorXd grad(p.m);
  for (int k = 0; k < p.m; ++k)
    grad(k) = 0.5 * y.dot(p.B[k] * y) - sigma(k) - p.d(k);
  return grad;
}

XiValue xi_eval(const QuarticProblem& p, const Eigen::VectorXd& x,
                const Eigen::VectorXd& sigma) {
  check_x_dim(p, x);
  check_s_dim(p, sigma);
  XiValue out;
  const Eigen::MatrixXd G = gmat(p, sigma);
  out.value = 0.5 * x.dot(G * x) -
              (0.5 * sigma.squaredNorm() + sigma.dot(p.d)) - x.dot(p.f);
  out.grad_x = G * x - p.f;
  out.grad_s = lambda_map(p, x) - sigma - p.d;
  return out;
}

double gap_eval(const QuarticProblem& p, const Eigen::VectorXd& x,
                const Eigen::VectorXd& sigma) {
  check_x_dim(p, x);
  return 0.5 * x.dot(gmat(p, sigma) * x);
}

Eigen::VectorXd recover_primal(const QuarticProblem& p,
                               const Eigen::VectorXd& sigma, double tol) {
  const DualEval de = dual_eval(p, sigma, tol);
  if (!de.feasible)
    throw InfeasibleDual("f is not in the column space of G(sigma)");
  return de.x;
}

}  // namespace qds
