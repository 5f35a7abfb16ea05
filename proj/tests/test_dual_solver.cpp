#include <doctest.h>

#include <cmath>

#include "qds/dual_solver.hpp"
#include "support.hpp"

using namespace qds;

namespace {

const DualCriticalPoint* find_near(const std::vector<DualCriticalPoint>& pts,
                                   const Eigen::VectorXd& sigma,
                                   double tol = 1e-6) {
  for (const auto& cp : pts)
    if ((cp.sigma - sigma).cwiseAbs().maxCoeff() <= tol) return &cp;
  return nullptr;
}

int count_region(const std::vector<DualCriticalPoint>& pts, Region r) {
  int c = 0;
  for (const auto& cp : pts)
    if (cp.region == r) ++c;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("dual_solver");

TEST_CASE("real_polynomial_roots on factored cubics") {
  // (t - 1)(t + 2)(t - 3) = t^3 - 2 t^2 - 5 t + 6
  Eigen::VectorXd c(4);
  c << 6, -5, -2, 1;
  const std::vector<double> roots = real_polynomial_roots(c);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-10));

  // t^2 + 1: no real roots.
  Eigen::VectorXd c2(3);
  c2 << 1, 0, 1;
  CHECK(real_polynomial_roots(c2).empty());
}

TEST_CASE("detect_separable recognizes the canned structures") {
  CHECK(detect_separable(qtest::example1()).has_value());
  CHECK(detect_separable(qtest::example2()).has_value());
  // n = 1 with two measures on the same coordinate: not axis-separable.
  CHECK_FALSE(detect_separable(qtest::example3()).has_value());
  // Commuting but non-diagonal pair: found via joint diagonalization.
  const auto s4 = detect_separable(qtest::example4());
  REQUIRE(s4.has_value());
  CHECK(s4->axis_poles[0].size() == 1);

  // Non-commuting measures have no separable form.
  QuarticProblem p;
  p.n = 2;
  p.m = 2;
  p.A = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b1(2, 2), b2(2, 2);
  b1 << 1, 0, 0, -1;
  b2 << 0, 1, 1, 0;
  p.B = {b1, b2};
  p.beta = qtest::vec({1.0, 1.0});
  p.d = qtest::vec({0.5, 0.5});
  p.f = qtest::vec({0.1, 0.2});
  p = validate_problem(p);
  CHECK_FALSE(detect_separable(p).has_value());
}

TEST_CASE("enumerate_separable: first example has exactly nine points") {
  const QuarticProblem p = qtest::example1();
  const auto s = detect_separable(p);
  REQUIRE(s.has_value());
  const std::vector<Eigen::VectorXd> pts = enumerate_separable(p, *s);
  CHECK(pts.size() == 9);
  // Axis-1 roots are 1+sqrt(2), 3/2, 1-sqrt(2).
  bool found = false;
  for (const auto& sigma : pts)
    if (std::abs(sigma(0) - (1.0 + std::sqrt(2.0))) < 1e-9 &&
        std::abs(sigma(1) - 3.35991198) < 1e-7)
      found = true;
  CHECK(found);
}

TEST_CASE("seed_candidates covers all pole cells of the second example") {
  const QuarticProblem p = qtest::example2();
  SolverConfig cfg = SolverConfig::defaults_for(p);
  const std::vector<Eigen::VectorXd> seeds = seed_candidates(p, cfg);
  bool left = false, mid = false, right = false;
  for (const auto& s : seeds) {
    if (s(0) < 0.2) left = true;
    else if (s(0) < 0.8) mid = true;
    else right = true;
  }
  CHECK(left);
  CHECK(mid);
  CHECK(right);
}

TEST_CASE("seed_candidates is deterministic and respects multistart_count") {
  const QuarticProblem p = qtest::example1();
  SolverConfig cfg = SolverConfig::defaults_for(p);
  const auto s1 = seed_candidates(p, cfg);
  const auto s2 = seed_candidates(p, cfg);
  REQUIRE(s1.size() == s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i)
    CHECK((s1[i] - s2[i]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s1.size() >= static_cast<std::size_t>(cfg.multistart_count));

  cfg.multistart_count = 1;
  cfg.sample_box_halfwidth = 0.0;  // box collapses; structured seeds stay
  const auto s3 = seed_candidates(p, cfg);
  CHECK(!s3.empty());
  // First structured seed is sigma = -d; the lone box sample sits at 0.
  CHECK((s3.front() + p.d).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s3.back().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("newton_refine converges to the known second-example points") {
  const QuarticProblem p = qtest::example2();
  const SolverConfig cfg = SolverConfig::defaults_for(p);

  const NewtonResult up = newton_refine(p, qtest::vec({0.9}), cfg);
  REQUIRE(up.status == NewtonStatus::Converged);
  CHECK(up.point->sigma(0) == doctest::Approx(0.90489505).epsilon(1e-7));
  CHECK(up.point->region == Region::SaPlus);

  const NewtonResult lo = newton_refine(p, qtest::vec({-0.1}), cfg);
  REQUIRE(lo.status == NewtonStatus::Converged);
  CHECK(lo.point->sigma(0) == doctest::Approx(-0.12552589).epsilon(1e-7));
  CHECK(lo.point->region == Region::SaMinus);
  CHECK(lo.point->dual_class == DualClass::LocalMin);
}

TEST_CASE("newton_refine returns immediately from a critical point") {
  const QuarticProblem p = qtest::example4();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  const NewtonResult r = newton_refine(p, qtest::vec({-0.5, -0.5}), cfg);
  REQUIRE(r.status == NewtonStatus::Converged);
  CHECK(r.iterations == 0);
  CHECK(r.point->dual_class == DualClass::LocalMax);
}

TEST_CASE("newton_refine never crosses poles: wrong-cell seed fails or "
          "stays in cell") {
  const QuarticProblem p = qtest::example2();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  // Seed in the middle cell (0.2, 0.8): whatever happens, the result must
  // stay in that cell.
  const NewtonResult r = newton_refine(p, qtest::vec({0.5}), cfg);
  if (r.status == NewtonStatus::Converged) {
    CHECK(r.point->sigma(0) > 0.2);
    CHECK(r.point->sigma(0) < 0.8);
  }
}

TEST_CASE("find_critical_points: first example, full census") {
  const QuarticProblem p = qtest::example1();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  const std::vector<DualCriticalPoint> pts = find_critical_points(p, cfg);

  CHECK(pts.size() == 9);  // 5 in Sa+ u Sa-, 4 outside
  CHECK(count_region(pts, Region::SaPlus) == 1);
  CHECK(count_region(pts, Region::SaMinus) == 4);
  CHECK(count_region(pts, Region::Outside) == 4);

  const double r2 = std::sqrt(2.0);
  const auto* s1 = find_near(pts, qtest::vec({1.0 + r2, 3.35991198}));
  REQUIRE(s1 != nullptr);
  CHECK(s1->region == Region::SaPlus);

  const auto* s2 = find_near(pts, qtest::vec({1.5, 2.59827880}));
  REQUIRE(s2 != nullptr);
  CHECK(s2->dual_class == DualClass::LocalMin);

  const auto* s3 = find_near(pts, qtest::vec({1.0 - r2, -0.45819078}));
  REQUIRE(s3 != nullptr);
  CHECK(s3->dual_class == DualClass::LocalMax);

  const auto* s4 = find_near(pts, qtest::vec({1.0 - r2, 2.59827880}));
  const auto* s5 = find_near(pts, qtest::vec({1.5, -0.45819078}));
  REQUIRE(s4 != nullptr);
  REQUIRE(s5 != nullptr);
  CHECK(s4->dual_class == DualClass::Saddle);
  CHECK(s5->dual_class == DualClass::Saddle);
}

TEST_CASE("find_critical_points: second and third examples") {
  {
    const QuarticProblem p = qtest::example2();
    const SolverConfig cfg = SolverConfig::defaults_for(p);
    const auto pts = find_critical_points(p, cfg);
    CHECK(count_region(pts, Region::SaPlus) == 1);
    CHECK(count_region(pts, Region::SaMinus) == 2);
    CHECK(find_near(pts, qtest::vec({0.90489505})) != nullptr);
    CHECK(find_near(pts, qtest::vec({-0.12552589})) != nullptr);
    CHECK(find_near(pts, qtest::vec({-3.974788888})) != nullptr);
  }
  {
    const QuarticProblem p = qtest::example3();
    const SolverConfig cfg = SolverConfig::defaults_for(p);
    const auto pts = find_critical_points(p, cfg);
    CHECK(pts.size() == 3);
    // Scalar-primal oracle: the cubic in g yields the same three points.
    const auto expected = qtest::n1_sigma_roots(p);
    REQUIRE(expected.size() == 3);
    for (const auto& sigma : expected)
      CHECK(find_near(pts, sigma, 1e-7) != nullptr);
    const auto* a = find_near(pts, qtest::vec({-0.35012607, 3.48303916}));
    REQUIRE(a != nullptr);
    CHECK(a->region == Region::SaPlus);
    const auto* b = find_near(pts, qtest::vec({-2.98705125, -2.66978626}));
    REQUIRE(b != nullptr);
    CHECK(b->dual_class == DualClass::LocalMax);
    const auto* c = find_near(pts, qtest::vec({-0.70765026, 2.64881606}));
    REQUIRE(c != nullptr);
    CHECK(c->dual_class == DualClass::Saddle);
  }
}

TEST_CASE("every returned point re-verifies stationarity and idempotence") {
  const QuarticProblem p = qtest::example1();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  const auto pts = find_critical_points(p, cfg);
  for (const auto& cp : pts) {
    const DualEval de = dual_eval(p, cp.sigma, cfg.definiteness_tol);
    CHECK(de.grad.cwiseAbs().maxCoeff() <= cfg.newton_tol);
    // Re-running Newton from the point returns the same point.
    const NewtonResult r = newton_refine(p, cp.sigma, cfg);
    REQUIRE(r.status == NewtonStatus::Converged);
    CHECK((r.point->sigma - cp.sigma).cwiseAbs().maxCoeff() <=
          cfg.dedup_tol * (1.0 + cp.sigma.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("determinism: identical problem and config give identical output") {
  const QuarticProblem p = qtest::example2();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  const auto a = find_critical_points(p, cfg);
  const auto b = find_critical_points(p, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].sigma - b[i].sigma).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a[i].dual_value == b[i].dual_value);
  }
}

TEST_CASE("results sorted by dual value descending") {
  const QuarticProblem p = qtest::example1();
  const auto pts = find_critical_points(p, SolverConfig::defaults_for(p));
  for (std::size_t i = 1; i < pts.size(); ++i)
    CHECK(pts[i - 1].dual_value >= pts[i].dual_value);
}

TEST_CASE("multistart recovers every enumerated point (rotated separable "
          "instances)") {
  Rng rng(31);
  int instances = 0, points_checked = 0;
  while (instances < 12) {
    const int n = 2 + int(rng.uniform() * 2);  // 2..3
    const qtest::SeparableTruth t = qtest::separable_instance(rng, n, true);
    const auto s = detect_separable(t.problem);
    REQUIRE(s.has_value());
    const std::vector<Eigen::VectorXd> expected =
        enumerate_separable(t.problem, *s);
    REQUIRE(!expected.empty());

    const SolverConfig cfg = SolverConfig::defaults_for(t.problem);
    const auto found = find_critical_points(t.problem, cfg);
    for (const auto& sigma : expected) {
      const auto* hit = find_near(found, sigma, 1e-6);
      CHECK(hit != nullptr);
      ++points_checked;
    }
    ++instances;
  }
  CHECK(points_checked >= 36);  // non-vacuity: several points per instance
}

TEST_SUITE_END();
