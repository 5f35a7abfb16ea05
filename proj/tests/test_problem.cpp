#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qds/oracle.hpp"
#include "qds/problem.hpp"
#include "support.hpp"

using namespace qds;

TEST_SUITE_BEGIN("problem");

TEST_CASE("load_problem parses the bundled first example") {
  std::ifstream in(qtest::problem_path("example1.problem"));
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  const QuarticProblem p = load_problem(buf.str());
  CHECK(p.n == 2);
  CHECK(p.m == 2);
  CHECK(p.A(0, 0) == -2.0);
  CHECK(p.A(1, 1) == -3.0);
  CHECK(p.B[0](0, 0) == 1.0);
  CHECK(p.B[1](1, 1) == 1.0);
  CHECK(p.d(0) == 0.5);
  CHECK(p.f(0) == 1.0);
  CHECK(p.beta(0) == 1.0);
}

TEST_CASE("negative beta is rejected") {
  const std::string text =
      "n 1\nm 1\nA\n1\nB 1\n1\nbeta -1\nd 0\nf 0\n";
  CHECK_THROWS_AS(load_problem(text), DomainError);
}

TEST_CASE("shape mismatch is rejected") {
  // B given as 2x3 by lying about n: the extra tokens break parsing.
  const std::string text =
      "n 2\nm 1\nA\n1 0\n0 1\nB 1\n1 0 0\n0 1 0\nbeta 1\nd 0\nf 0 0\n";
  CHECK_THROWS_AS(load_problem(text), ParseError);
}

TEST_CASE("asymmetry beyond tolerance is rejected, tiny asymmetry fixed") {
  QuarticProblem p = qtest::example1();
  p.A(0, 1) = 1e-3;
  CHECK_THROWS_AS(validate_problem(p), DomainError);

  p = qtest::example1();
  p.A(0, 1) = 1e-13;  // within tolerance: symmetrized away
  const QuarticProblem q = validate_problem(p);
  CHECK(q.A(0, 1) == q.A(1, 0));
}

TEST_CASE("unknown fields and missing fields are parse errors") {
  CHECK_THROWS_AS(load_problem("n 1\nm 1\nbogus 3\n"), ParseError);
  CHECK_THROWS_AS(load_problem("n 1\nm 1\nA\n1\nd 0\nf 0\n"), ParseError);
}

TEST_CASE("normalize_beta: identity when beta is already ones") {
  const QuarticProblem p = qtest::example1();
  const QuarticProblem q = normalize_beta(p);
  CHECK(problems_equal(p, q));
}

TEST_CASE("normalize_beta: beta=4 doubles B and d") {
  QuarticProblem p;
  p.n = 2;
  p.m = 1;
  p.A = qtest::diag({1.0, 2.0});
  Eigen::MatrixXd M(2, 2);
  M << 2, 1, 1, 3;
  p.B = {M};
  p.beta = qtest::vec({4.0});
  p.d = qtest::vec({0.7});
  p.f = qtest::vec({0.1, -0.2});
  p = validate_problem(p);

  const QuarticProblem q = normalize_beta(p);
  CHECK(q.beta(0) == 1.0);
  CHECK((q.B[0] - 2.0 * M).cwiseAbs().maxCoeff() == 0.0);
  CHECK(q.d(0) == doctest::Approx(1.4).epsilon(1e-15));
}

TEST_CASE("normalize_beta preserves Pi pointwise (oracle)") {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 1 + int(rng.uniform() * 3);
    const int m = 1 + int(rng.uniform() * 3);
    QuarticProblem p = qtest::random_instance(rng, n, m);
    for (int k = 0; k < m; ++k) p.beta(k) = rng.uniform(0.2, 5.0);
    const QuarticProblem q = normalize_beta(p);
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = rng.uniform_vector(n, -3.0, 3.0);
      const double vp = oracle::primal_value(p, x);
      const double vq = oracle::primal_value(q, x);
      CHECK(std::abs(vp - vq) <= 1e-12 * (1.0 + std::abs(vp)));
    }
  }
}

TEST_CASE("serialize/load round-trip is exact on the data model") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + int(rng.uniform() * 4);
    const int m = 1 + int(rng.uniform() * 4);
    const QuarticProblem p = qtest::random_instance(rng, n, m);
    const QuarticProblem q = load_problem(serialize_problem(p));
    CHECK(problems_equal(p, q));
  }
}

TEST_CASE("digest is stable and content-sensitive") {
  const QuarticProblem p = qtest::example1();
  CHECK(problem_digest(p) == problem_digest(qtest::example1()));
  QuarticProblem q = p;
  q.f(0) += 1e-9;
  CHECK(problem_digest(p) != problem_digest(q));
}

TEST_SUITE_END();
