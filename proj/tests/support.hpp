#pragma once

// Shared helpers for the test suites: canned instances and random
// instance generators biased toward the structures the property suites
// need (dual local minima / maxima in the G < 0 region).

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qds/dual_solver.hpp"
#include "qds/problem.hpp"
#include "qds/rng.hpp"

namespace qtest {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Eigen::MatrixXd diag(std::initializer_list<double> v) {
  Eigen::VectorXd d = vec(v);
  return d.asDiagonal();
}

inline std::string problem_path(const std::string& name) {
  return std::string(QDS_PROBLEMS_DIR) + "/" + name;
}

// The four canned instances, constructed directly (load_problem is tested
// separately against these).
inline qds::QuarticProblem example1() {
  qds::QuarticProblem p;
  p.n = 2;
  p.m = 2;
  p.A = diag({-2.0, -3.0});
  p.B = {diag({1.0, 0.0}), diag({0.0, 1.0})};
  p.beta = vec({1.0, 1.0});
  p.d = vec({0.5, 0.5});
  p.f = vec({1.0, 1.0});
  return qds::validate_problem(p);
}

inline qds::QuarticProblem example2() {
  qds::QuarticProblem p;
  p.n = 2;
  p.m = 1;
  p.A = diag({-0.2, -0.8});
  p.B = {Eigen::MatrixXd::Identity(2, 2)};
  p.beta = vec({1.0});
  p.d = vec({4.0});
  p.f = vec({0.9, 0.3});
  return qds::validate_problem(p);
}

inline qds::QuarticProblem example3() {
  qds::QuarticProblem p;
  p.n = 1;
  p.m = 2;
  p.A = Eigen::MatrixXd::Constant(1, 1, -2.0);
  p.B = {Eigen::MatrixXd::Constant(1, 1, 0.3),
         Eigen::MatrixXd::Constant(1, 1, 0.7)};
  p.beta = vec({1.0, 1.0});
  p.d = vec({3.0, 2.7});
  p.f = vec({1.4});
  return qds::validate_problem(p);
}

inline qds::QuarticProblem example4() {
  qds::QuarticProblem p;
  p.n = 2;
  p.m = 2;
  p.A = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b1(2, 2), b2(2, 2);
  b1 << 1, 1, 1, 1;
  b2 << 1, -1, -1, 1;
  p.B = {b1, b2};
  p.beta = vec({1.0, 1.0});
  p.d = vec({0.5, 0.5});
  p.f = vec({0.0, 0.0});
  return qds::validate_problem(p);
}

// Generic dense random instance; no structure guarantees.
inline qds::QuarticProblem random_instance(qds::Rng& rng, int n, int m) {
  qds::QuarticProblem p;
  p.n = n;
  p.m = m;
  p.A = rng.symmetric_matrix(n);
  for (int k = 0; k < m; ++k) p.B.push_back(rng.symmetric_matrix(n));
  p.beta = Eigen::VectorXd::Ones(m);
  p.d = rng.uniform_vector(m, -1.0, 1.0);
  p.f = rng.uniform_vector(n, -1.0, 1.0);
  return qds::validate_problem(p);
}

// Separable double-well instance conjugated by a random rotation, so the
// solver sees dense matrices while every dual critical point is known from
// per-axis cubics. Negative-definite A and moderate wells make points in
// the G < 0 region common.
struct SeparableTruth {
  qds::QuarticProblem problem;
  Eigen::VectorXd a;   // per-coordinate A entries (diagonal frame)
  Eigen::VectorXd b;   // per-coordinate well stiffness, axis k owns coord k
  Eigen::VectorXd f;   // diagonal-frame forcing
};

inline SeparableTruth separable_instance(qds::Rng& rng, int n, bool rotate) {
  SeparableTruth t;
  t.a = Eigen::VectorXd(n);
  t.b = Eigen::VectorXd(n);
  t.f = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) {
    t.a(i) = rng.uniform(-3.0, -0.5);
    t.b(i) = rng.uniform(0.5, 1.5);
    t.f(i) = rng.uniform(0.2, 1.2) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
  }
  qds::QuarticProblem p;
  p.n = n;
  p.m = n;
  const Eigen::MatrixXd Q =
      rotate ? rng.orthogonal_matrix(n)
             : Eigen::MatrixXd::Identity(n, n);
  p.A = Q * t.a.asDiagonal() * Q.transpose();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd bk = Eigen::VectorXd::Zero(n);
    bk(k) = t.b(k);
    p.B.push_back(Q * bk.asDiagonal() * Q.transpose());
  }
  p.beta = Eigen::VectorXd::Ones(n);
  p.d = rng.uniform_vector(n, 0.3, 1.2);
  p.f = Q * t.f;
  t.problem = qds::validate_problem(p);
  return t;
}

// m = 1 < n instance shaped like a deep single well with strong forcing;
// reliably produces a dual local minimum with G < 0.
inline qds::QuarticProblem tall_instance(qds::Rng& rng, int n) {
  qds::QuarticProblem p;
  p.n = n;
  p.m = 1;
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a(i) = rng.uniform(-0.9, -0.1);
  const Eigen::MatrixXd Q = rng.orthogonal_matrix(n);
  p.A = Q * a.asDiagonal() * Q.transpose();
  p.B = {Eigen::MatrixXd::Identity(n, n)};
  p.beta = qtest::vec({1.0});
  p.d = qtest::vec({rng.uniform(2.0, 6.0)});
  p.f = Q * rng.uniform_vector(n, 0.2, 1.0);
  return qds::validate_problem(p);
}

// Exact dual critical points for scalar-primal instances (n = 1): with
// g = G(sigma) and stationarity sigma_k = B^k f^2 / (2 g^2) - d_k, the
// scalar g solves g^3 - c0 g^2 - c2 = 0 with c0 = A - sum_k B^k d_k and
// c2 = f^2/2 sum_k (B^k)^2. Independent route used as a test oracle.
inline std::vector<Eigen::VectorXd> n1_sigma_roots(
    const qds::QuarticProblem& p) {
  REQUIRE(p.n == 1);
  const double A = p.A(0, 0), f2 = p.f(0) * p.f(0);
  double c0 = A, c2 = 0.0;
  for (int k = 0; k < p.m; ++k) {
    c0 -= p.B[k](0, 0) * p.d(k);
    c2 += 0.5 * f2 * p.B[k](0, 0) * p.B[k](0, 0);
  }
  Eigen::VectorXd coeffs(4);
  coeffs << -c2, 0.0, -c0, 1.0;
  std::vector<Eigen::VectorXd> out;
  for (double g : qds::real_polynomial_roots(coeffs)) {
    if (std::abs(g) < 1e-12) continue;
    Eigen::VectorXd sigma(p.m);
    for (int k = 0; k < p.m; ++k)
      sigma(k) = 0.5 * p.B[k](0, 0) * f2 / (g * g) - p.d(k);
    out.push_back(sigma);
  }
  return out;
}

// m > n instance in the style of a scalar primal with several measures.
inline qds::QuarticProblem wide_instance(qds::Rng& rng, int n, int m) {
  qds::QuarticProblem p;
  p.n = n;
  p.m = m;
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a(i) = rng.uniform(-3.0, -1.0);
  p.A = a.asDiagonal();
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd v = rng.uniform_vector(n, 0.2, 1.0);
    p.B.push_back(Eigen::MatrixXd(v.asDiagonal()));
  }
  p.beta = Eigen::VectorXd::Ones(m);
  p.d = rng.uniform_vector(m, 1.0, 3.0);
  p.f = rng.uniform_vector(n, 0.5, 2.0);
  return qds::validate_problem(p);
}

}  // namespace qtest
