#include <doctest.h>

#include <cmath>

#include "qds/oracle.hpp"
#include "qds/perturbation.hpp"
#include "support.hpp"

using namespace qds;

TEST_SUITE_BEGIN("perturbation");

TEST_CASE("unperturbed symmetric instance: degenerate, origin is a local "
          "maximizer") {
  const QuarticProblem p = qtest::example4();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  const Report rep = solve_problem(p, cfg);

  CHECK(detect_degeneracy(rep));
  CHECK(rep.degenerate);
  REQUIRE(rep.pairs.size() == 1);
  const ReportPair& rp = rep.pairs.front();
  CHECK((rp.pair.sigma - qtest::vec({-0.5, -0.5})).cwiseAbs().maxCoeff() <=
        1e-9);
  CHECK(rp.pair.x.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(rp.verdict.kind == VerdictKind::LocalMax);
  CHECK(linalg::definiteness(rp.pair.primal.hess).cls ==
        linalg::DefClass::NegDef);
}

TEST_CASE("examples with Sa+ points are not degenerate") {
  for (const QuarticProblem& p :
       {qtest::example1(), qtest::example2(), qtest::example3()}) {
    const Report rep = solve_problem(p, SolverConfig::defaults_for(p));
    CHECK_FALSE(detect_degeneracy(rep));
  }
}

TEST_CASE("perturbed solve matches the published table values") {
  const QuarticProblem p = qtest::example4();
  const SolverConfig cfg = SolverConfig::defaults_for(p);

  const Report rep =
      perturb_and_solve(p, qtest::vec({0.001, 0.005}), cfg);
  CHECK(rep.perturbed);
  CHECK(rep.f_pert_norm == doctest::Approx(std::hypot(0.001, 0.005)));
  CHECK_FALSE(rep.degenerate);
  REQUIRE(!rep.pairs.empty());
  const ReportPair& g = rep.pairs.front();
  REQUIRE(g.verdict.kind == VerdictKind::GlobalMin);
  CHECK(std::abs(g.pair.sigma(0) - 0.00299107) <= 1e-6);
  CHECK(std::abs(g.pair.sigma(1) - 0.00199602) <= 1e-6);
  CHECK(std::abs(g.pair.dual.value - (-0.00500648)) <= 1e-6);
  CHECK(std::abs(g.pair.x(0) - 0.000495793) <= 1e-5);
  CHECK(std::abs(g.pair.x(1) - 1.00249) <= 1e-5);

  const Report rep2 =
      perturb_and_solve(p, qtest::vec({0.001, -0.005}), cfg);
  REQUIRE(!rep2.pairs.empty());
  const ReportPair& g2 = rep2.pairs.front();
  REQUIRE(g2.verdict.kind == VerdictKind::GlobalMin);
  CHECK(std::abs(g2.pair.x(0) - 0.000496288) <= 1e-5);
  CHECK(std::abs(g2.pair.x(1) - (-1.00249)) <= 1e-5);
}

TEST_CASE("zero perturbation is rejected") {
  const QuarticProblem p = qtest::example4();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  CHECK_THROWS_AS(perturb_and_solve(p, qtest::vec({0.0, 0.0}), cfg),
                  PreconditionViolated);
  CHECK_THROWS_AS(perturb_and_solve(p, qtest::vec({0.0}), cfg),
                  DimensionError);
}

TEST_CASE("perturbation continuity: minimizer approaches the tied wells as "
          "epsilon shrinks") {
  const QuarticProblem p = qtest::example4();
  const SolverConfig cfg = SolverConfig::defaults_for(p);
  Eigen::VectorXd dir = qtest::vec({0.2, 1.0});
  dir /= dir.norm();

  const std::vector<Eigen::VectorXd> wells = {
      qtest::vec({1.0, 0.0}), qtest::vec({-1.0, 0.0}),
      qtest::vec({0.0, 1.0}), qtest::vec({0.0, -1.0})};
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const Report rep = perturb_and_solve(p, eps * dir, cfg);
    REQUIRE(!rep.pairs.empty());
    REQUIRE(rep.pairs.front().verdict.kind == VerdictKind::GlobalMin);
    const Eigen::VectorXd x = rep.pairs.front().pair.x;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& w : wells) dist = std::min(dist, (x - w).norm());
    CHECK(dist < prev);
    prev = dist;
    // The perturbed minimizer sits near a point of zero unperturbed cost.
    CHECK(oracle::primal_value(p, x) <= 10.0 * eps);
  }
}

TEST_CASE("default_perturbation has magnitude 1e-3 and is deterministic") {
  const QuarticProblem p = qtest::example4();
  const Eigen::VectorXd a = default_perturbation(p, 42);
  const Eigen::VectorXd b = default_perturbation(p, 42);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.norm() == doctest::Approx(1e-3).epsilon(1e-12));
  const Eigen::VectorXd c = default_perturbation(p, 43);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_SUITE_END();
