#include <cmath>

#include "doctest.h"
#include "nszcap/sdpsolver.hpp"
#include "test_helpers.hpp"

using namespace nszcap;
using namespace nszcap::sdp;

TEST_CASE("realify") {
  CHECK(max_abs_diff(realify(identity(2)).cast<Complex>(), identity(4)) == 0.0);
  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const RealVector ev = eig_hermitian(realify(y).cast<Complex>()).eigenvalues;
  CHECK(ev(0) == doctest::Approx(-1.0));
  CHECK(ev(1) == doctest::Approx(-1.0));
  CHECK(ev(2) == doctest::Approx(1.0));
  CHECK(ev(3) == doctest::Approx(1.0));

  std::mt19937_64 rng(7);
  const ComplexMatrix a = testing::random_hermitian(3, rng);
  const ComplexMatrix b = testing::random_hermitian(3, rng);
  const ComplexMatrix g = testing::random_matrix(3, 3, rng);
  const ComplexMatrix psd = g * g.adjoint();
  CHECK(eig_hermitian(realify(psd).cast<Complex>()).eigenvalues.minCoeff() >= -1e-12);
  CHECK(realify(a).trace() == doctest::Approx(2.0 * a.trace().real()));
  CHECK((realify(a).cwiseProduct(realify(b))).sum() ==
        doctest::Approx(2.0 * (a * b).trace().real()));
  CHECK(max_abs_diff(complexify(realify(a)), a) < 1e-15);
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(realify(bad), InputError);
}

TEST_CASE("one-dimensional program with a slack") {
  Problem p;
  const int x = p.add_block(BlockKind::kPsdHermitian, 1);
  const int s = p.add_block(BlockKind::kNonnegDiagonal, 1);
  p.objective.push_back({x, 0, 0, 1.0});
  p.constraints.push_back({{{x, 0, 0, 1.0}, {s, 0, 0, 1.0}}, 1.0});
  const Solution sol = solve(p);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.gap <= 1e-8 * (1 + std::abs(sol.primal_value)));
}

namespace {
// theta of the n-cycle: max <J, X> s.t. tr X = 1, X_ij = 0 on edges.
Problem theta_cycle(int n) {
  Problem p;
  const int b = p.add_block(BlockKind::kPsdHermitian, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) p.objective.push_back({b, i, j, 1.0});
  Coefficient trace;
  for (int i = 0; i < n; ++i) trace.push_back({b, i, i, 1.0});
  p.constraints.push_back({trace, 1.0});
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    p.constraints.push_back({{{b, std::min(i, j), std::max(i, j), 0.5}}, 0.0});
  }
  return p;
}
}  // namespace

TEST_CASE("Lovasz theta of the pentagon is sqrt 5") {
  const Solution sol = solve(theta_cycle(5));
  REQUIRE(sol.status == Status::kOptimal);
  CHECK(std::abs(sol.primal_value - std::sqrt(5.0)) < 1e-7);
  CHECK(std::abs(sol.dual_value - std::sqrt(5.0)) < 1e-7);
  // weak duality at the returned iterate
  CHECK(sol.primal_value <= sol.dual_value + 10 * 1e-8 * (1 + sol.dual_value));
  CHECK(sol.real_arithmetic);
  // repeated solves agree
  const Solution again = solve(theta_cycle(5));
  CHECK(std::abs(again.primal_value - sol.primal_value) <= 1e-9);
  CHECK(sol.iterations == again.iterations);
}

TEST_CASE("theta of odd cycles") {
  for (int n : {7, 9}) {
    const double expect = n * std::cos(M_PI / n) / (1 + std::cos(M_PI / n));
    const Solution sol = solve(theta_cycle(n));
    REQUIRE(sol.status == Status::kOptimal);
    CHECK(std::abs(sol.primal_value - expect) < 1e-7);
  }
}

TEST_CASE("complex Hermitian block: largest eigenvalue") {
  std::mt19937_64 rng(31);
  const ComplexMatrix c = testing::random_hermitian(4, rng);
  Problem p;
  const int b = p.add_block(BlockKind::kPsdHermitian, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) p.objective.push_back({b, i, j, c(i, j)});
  Coefficient trace;
  for (int i = 0; i < 4; ++i) trace.push_back({b, i, i, 1.0});
  p.constraints.push_back({trace, 1.0});
  const Solution sol = solve(p);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK_FALSE(sol.real_arithmetic);
  CHECK(std::abs(sol.primal_value - eig_hermitian(c).eigenvalues.maxCoeff()) < 1e-7);
  const ComplexMatrix& x = sol.primal_blocks[b];
  CHECK(std::abs(x.trace().real() - 1.0) < 1e-8);
  CHECK(min_eigenvalue(x) >= -1e-8);
  CHECK(std::abs(evaluate(trace, sol.primal_blocks) - 1.0) < 1e-8);
}

TEST_CASE("split_functional separates real and imaginary parts") {
  std::mt19937_64 rng(37);
  const ComplexMatrix g = testing::random_matrix(3, 3, rng);
  std::vector<GeneralEntry> f;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) f.push_back({0, r, c, g(r, c)});
  const auto [re, im] = split_functional(f);
  const ComplexMatrix x = testing::random_hermitian(3, rng);
  const Complex value = (g * x).trace();
  CHECK(std::abs(evaluate(re, {x}) - value.real()) < 1e-12);
  CHECK(std::abs(evaluate(im, {x}) - value.imag()) < 1e-12);
}

TEST_CASE("dependent constraints are dropped") {
  Problem p;
  const int x = p.add_block(BlockKind::kPsdHermitian, 2);
  p.objective.push_back({x, 0, 0, 1.0});
  p.constraints.push_back({{{x, 0, 0, 1.0}, {x, 1, 1, 1.0}}, 1.0});
  p.constraints.push_back({{{x, 0, 0, 2.0}, {x, 1, 1, 2.0}}, 2.0});
  const Solution sol = solve(p);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK(sol.dropped_constraints == 1);
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("unbounded and infeasible programs are not reported optimal") {
  Problem unbounded;
  const int x = unbounded.add_block(BlockKind::kNonnegDiagonal, 2);
  unbounded.objective.push_back({x, 0, 0, 1.0});
  unbounded.constraints.push_back({{{x, 0, 0, 1.0}, {x, 1, 1, -1.0}}, 1.0});
  const Solution u = solve(unbounded);
  CHECK(u.status != Status::kOptimal);

  Problem infeasible;
  const int y = infeasible.add_block(BlockKind::kNonnegDiagonal, 2);
  infeasible.objective.push_back({y, 0, 0, 1.0});
  infeasible.constraints.push_back({{{y, 0, 0, 1.0}, {y, 1, 1, 1.0}}, -1.0});
  const Solution i = solve(infeasible);
  CHECK(i.status != Status::kOptimal);
}

TEST_CASE("problem validation") {
  Problem p;
  p.add_block(BlockKind::kPsdHermitian, 2);
  p.objective.push_back({1, 0, 0, 1.0});
  CHECK_THROWS_AS(p.validate(), InputError);
  Problem q;
  q.add_block(BlockKind::kPsdHermitian, 2);
  q.objective.push_back({0, 0, 0, Complex(1.0, 1.0)});
  CHECK_THROWS_AS(q.validate(), InputError);
  Problem r;
  r.add_block(BlockKind::kNonnegDiagonal, 2);
  r.objective.push_back({0, 0, 1, 1.0});
  CHECK_THROWS_AS(r.validate(), InputError);
}
