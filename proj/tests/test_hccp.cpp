#include "hcone/hccp.hpp"
#include "hcone/instances.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcone;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Element scalar(double v) { return from_hermitian(builtin("orthant(1)"), VectorXd::Constant(1, v)); }

}  // namespace

TEST(NaturalResidual, ScalarClosedForm) {
  const auto a = builtin("orthant(1)");
  const HccpProblem p(a, Map::identity(a), scalar(-1.0));
  EXPECT_NEAR(to_hermitian(natural_residual(p, scalar(2.0)))[0], 1.0, 1e-12);
  EXPECT_NEAR(norm(natural_residual(p, scalar(1.0))), 0.0, 1e-12);
  for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7, 4.0})
    EXPECT_NEAR(to_hermitian(natural_residual(p, scalar(x)))[0], std::min(x, x - 1.0), 1e-12) << x;
}

TEST(NaturalResidual, ZeroAtMoreauPair) {
  std::mt19937_64 rng(3);
  for (const char* name : {"psd(3)", "vinberg5"}) {
    const auto a = builtin(name);
    const MatrixXd M = MatrixXd::Random(a->hermitian_dim(), a->hermitian_dim());
    const Map F = Map::linear(M);
    const auto f = project(gaussian_sampler(a)(rng));
    const HccpProblem p(a, F, f.proj_Kstar() - F(f.proj_K()));
    EXPECT_LE(norm(natural_residual(p, f.proj_K())), 1e-8);
  }
}

TEST(Solve, IdentityMinusUnit) {
  const auto a = builtin("vinberg5");
  const HccpProblem p(a, Map::identity(a), -unit(a));
  EXPECT_LE(norm(natural_residual(p, unit(a))), 1e-14);
  for (SolveMethod m : {SolveMethod::newton, SolveMethod::fixedpoint}) {
    SolveOptions so;
    so.method = m;
    so.x0 = random_cone_point(a, 5, true);
    const Solution s = solve(p, so);
    EXPECT_TRUE(s.converged) << to_string(m);
    EXPECT_LE(s.residual_norm, 1e-8);
    EXPECT_LE(norm(s.x - unit(a)), 1e-7);
  }
}

TEST(Solve, DecoupledOrthant) {
  const auto a = builtin("orthant(2)");
  const HccpProblem p(a, Map::identity(a), from_hermitian(a, Eigen::Vector2d(-1, 1)));
  const Solution s = solve(p);
  ASSERT_TRUE(s.converged);
  EXPECT_LE((to_hermitian(s.x) - Eigen::Vector2d(1, 0)).norm(), 1e-8);
  EXPECT_LE((to_hermitian(s.y) - Eigen::Vector2d(0, 1)).norm(), 1e-8);
}

TEST(Solve, MatchesLcpEnumeration) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 6; ++n) {
    const auto a = builtin("orthant(" + std::to_string(n) + ")");
    for (int k = 0; k < 5; ++k) {
      const MatrixXd M = random_P_matrix(n, rng);
      ASSERT_TRUE(oracle::is_P_matrix(M));
      VectorXd q(n);
      for (int i = 0; i < n; ++i) q[i] = g(rng);
      const auto sols = oracle::lcp_enumerate(M, q);
      ASSERT_EQ(sols.size(), 1u);
      // The projected iteration is only guaranteed for monotone M.
      const bool monotone =
          Eigen::SelfAdjointEigenSolver<MatrixXd>(M + M.transpose()).eigenvalues().minCoeff() > 0.0;
      for (SolveMethod m : {SolveMethod::newton, SolveMethod::fixedpoint}) {
        if (m == SolveMethod::fixedpoint && !monotone) continue;
        SolveOptions so;
        so.method = m;
        const Solution s = solve(HccpProblem(a, Map::linear(M), from_hermitian(a, q)), so);
        EXPECT_TRUE(s.converged) << n << ' ' << to_string(m);
        EXPECT_LE((to_hermitian(s.x) - sols[0]).norm(), 1e-6) << n << ' ' << to_string(m);
      }
    }
  }
}

TEST(Solve, MultistartAgrees) {
  const auto a = builtin("vinberg5");
  const InstanceBundle b = random_problem(a, "builtin:vinberg5", 11, ProblemClass::strongly_monotone);
  const auto sols = multistart(b.problem, 8, 3);
  ASSERT_EQ(sols.size(), 8u);
  for (std::size_t k = 0; k < sols.size(); ++k) {
    EXPECT_TRUE(sols[k].converged);
    EXPECT_EQ(sols[k].start, static_cast<int>(k));
    EXPECT_LE(norm(sols[k].x - *b.xstar), 1e-6);
  }
  EXPECT_LE(solution_spread(sols), 1e-6);
}

TEST(Solve, Deterministic) {
  const auto a = builtin("psd(3)");
  const InstanceBundle b = random_problem(a, "builtin:psd(3)", 5, ProblemClass::monotone);
  const Solution s1 = solve(b.problem), s2 = solve(b.problem);
  EXPECT_EQ(s1.x.coeffs(), s2.x.coeffs());
  EXPECT_EQ(s1.iterations, s2.iterations);
}

TEST(Solve, NonConvergenceIsReported) {
  const auto a = builtin("orthant(1)");
  // x >= 0, -x - 1 >= 0 is infeasible.
  const HccpProblem p(a, Map::linear(MatrixXd::Constant(1, 1, -1.0)), scalar(-1.0));
  SolveOptions so;
  so.max_iterations = 20;
  const Solution s = solve(p, so);
  EXPECT_FALSE(s.converged);
  EXPECT_GT(s.residual_norm, 1e-3);
}

TEST(Verify, ConstructedSolutionPasses) {
  for (const char* name : {"orthant(3)", "psd(2)", "vinberg5"}) {
    const auto a = builtin(name);
    const InstanceBundle b = random_problem(a, name, 13, ProblemClass::monotone);
    EXPECT_TRUE(verify_solution(b.problem, *b.xstar).all_hold()) << name;
  }
}

TEST(Verify, UnitWithZeroOffsetFails) {
  const auto a = builtin("vinberg5");
  const HccpProblem p(a, Map::identity(a), Element(a));
  const auto r = verify_solution(p, unit(a));
  EXPECT_FALSE(r.get("c").holds);
  EXPECT_DOUBLE_EQ(r.xy_inner, 3.0);
}

TEST(Verify, PerturbedSolutionFails) {
  const auto a = builtin("vinberg5");
  const HccpProblem p(a, Map::identity(a), -unit(a));
  const auto r = verify_solution(p, unit(a) + 0.1 * unit(a));
  EXPECT_FALSE(r.all_hold());
  EXPECT_NEAR(r.get("a").residual, 0.1 * std::sqrt(3.0), 1e-6);
}

TEST(Verify, VinbergPairFailsOnDiagonal) {
  const auto a = builtin("vinberg5");
  const Element y = from_hermitian(a, (VectorXd(5) << 1, 2, 4, 2, 4).finished());
  const HccpProblem p(a, Map::zero(a), y);
  const auto r = verify_solution(p, from_hermitian(a, (VectorXd(5) << 5, -2, 1, -2, 5).finished()));
  EXPECT_EQ(r.xy_diag[0], -3.0);
  EXPECT_FALSE(r.all_hold());
}

TEST(MapTest, LinearOnHermitianCoordinates) {
  const auto a = builtin("orthant(2)");
  MatrixXd M(2, 2);
  M << 3, 0, 0, 1;
  const Map F = Map::linear(M);
  EXPECT_TRUE(F.is_linear());
  EXPECT_EQ(to_hermitian(F(from_hermitian(a, Eigen::Vector2d(1, 1)))), VectorXd(Eigen::Vector2d(3, 1)));
  const Map G = Map::callable([](const Element& x) { return 2.0 * x; }, "double");
  EXPECT_FALSE(G.is_linear());
  EXPECT_THROW(G.matrix(), std::logic_error);
  EXPECT_THROW(solve_method_from_string("simplex"), std::invalid_argument);
}
