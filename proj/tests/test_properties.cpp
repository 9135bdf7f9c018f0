#include "hcone/instances.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcone;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd mat2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

AlgebraPtr o2() { return builtin("orthant(2)"); }

ProbeOptions opts(long samples = 500, std::uint64_t seed = 1) {
  ProbeOptions po;
  po.samples = samples;
  po.seed = seed;
  return po;
}

double trace_max(const Element& z, const Element& w) {
  const Element zw = mul(z, w);
  double m = -1e300;
  for (int i = 0; i < z.algebra().rank(); ++i) m = std::max(m, zw.diagonal_value(i));
  return m;
}

}  // namespace

TEST(Monotone, SkewIsMonotoneNotStrict) {
  const Map F = Map::linear(mat2(0, -1, 1, 0));
  EXPECT_FALSE(probe_monotone(F, o2(), MonotoneVariant::monotone, opts()).has_counterexample());
  const auto v = probe_monotone(F, o2(), MonotoneVariant::strict, opts());
  ASSERT_TRUE(v.has_counterexample());
  ASSERT_TRUE(v.witness_x && v.witness_y);
  EXPECT_GT(norm(*v.witness_x - *v.witness_y), 0.0);
}

TEST(Monotone, IdentityStrongWithUnitModulus) {
  for (const char* name : {"orthant(3)", "psd(3)", "vinberg5"}) {
    const auto a = builtin(name);
    const auto v = probe_monotone(Map::identity(a), a, MonotoneVariant::strong, opts());
    EXPECT_FALSE(v.has_counterexample());
    ASSERT_TRUE(v.modulus);
    EXPECT_NEAR(*v.modulus, 1.0, 1e-9) << name;
    EXPECT_TRUE(v.exact);
  }
}

TEST(Monotone, NegativeDirectionIsWitnessed) {
  const auto v = probe_monotone(Map::linear(mat2(1, 0, 0, -1)), o2(), MonotoneVariant::monotone, opts());
  ASSERT_TRUE(v.has_counterexample());
  const Element z = *v.witness_x - *v.witness_y;
  EXPECT_LT(inner(z, Map::linear(mat2(1, 0, 0, -1))(z)), 0.0);
}

TEST(TraceP, SwapMatrixFails) {
  const Map F = Map::linear(mat2(0, 1, 1, 0));
  const auto v = probe_trace_P(F, o2(), TraceVariant::trace_P, opts());
  ASSERT_TRUE(v.has_counterexample());
  const Element z = *v.witness_x - *v.witness_y;
  EXPECT_LE(trace_max(z, F(z)), v.threshold);
  const Element d = from_hermitian(o2(), Eigen::Vector2d(1, -1));
  EXPECT_DOUBLE_EQ(trace_max(d, F(d)), -1.0);
}

TEST(TraceP, TriangularPMatrixPasses) {
  const MatrixXd M = mat2(1, 2, 0, 1);
  ASSERT_TRUE(oracle::is_P_matrix(M));
  EXPECT_FALSE(probe_trace_P(Map::linear(M), o2(), TraceVariant::trace_P, opts(2000)).has_counterexample());
}

TEST(TraceP, IdentityOnEveryBuiltin) {
  for (const char* name : {"orthant(3)", "psd(2)", "psd(3)", "vinberg5"}) {
    const auto a = builtin(name);
    const auto v = probe_trace_P(Map::identity(a), a, TraceVariant::uniform_trace_P, opts(1000));
    EXPECT_FALSE(v.has_counterexample()) << name;
    ASSERT_TRUE(v.modulus);
    EXPECT_GT(*v.modulus, 0.0);
  }
}

TEST(TraceP, AgreesWithPrincipalMinorOracle) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  int p_count = 0, not_p = 0;
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 4;
    MatrixXd M(n, n);
    if (k % 2 == 0) {
      M = random_P_matrix(n, rng);
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = g(rng);
    }
    const auto a = builtin("orthant(" + std::to_string(n) + ")");
    const bool isP = oracle::is_P_matrix(M);
    const auto v = probe_trace_P(Map::linear(M), a, TraceVariant::trace_P, opts(500, k));
    EXPECT_EQ(v.has_counterexample(), !isP) << M;
    (isP ? p_count : not_p)++;
  }
  EXPECT_GT(p_count, 5);
  EXPECT_GT(not_p, 5);
}

TEST(PProperty, OrderPOnOrthant) {
  EXPECT_FALSE(probe_P(Map::identity(o2()), o2(), PVariant::order_P, opts(300)).has_counterexample());
  EXPECT_TRUE(probe_P(Map::linear(mat2(0, 1, 1, 0)), o2(), PVariant::order_P, opts(300)).has_counterexample());
}

TEST(PProperty, IdentityOnPsd) {
  const auto a = builtin("psd(2)");
  const auto v = probe_P(Map::identity(a), a, PVariant::P, opts(2000));
  EXPECT_FALSE(v.has_counterexample());
}

TEST(PProperty, SwapMatrixFailsP) {
  EXPECT_TRUE(probe_P(Map::linear(mat2(0, 1, 1, 0)), o2(), PVariant::P, opts(300)).has_counterexample());
  EXPECT_TRUE(probe_P(Map::linear(mat2(0, 1, 1, 0)), o2(), PVariant::P0, opts(300)).has_counterexample());
}

TEST(R0, IdentityHoldsZeroFails) {
  for (const char* name : {"orthant(2)", "psd(2)", "vinberg5"}) {
    const auto a = builtin(name);
    EXPECT_FALSE(probe_R0(Map::identity(a), a, opts(200)).has_counterexample()) << name;
    const auto z = probe_R0(Map::zero(a), a, opts(200));
    ASSERT_TRUE(z.has_counterexample()) << name;
    EXPECT_FALSE(z.ray.empty());
  }
}

TEST(R0, DegenerateDiagonal) {
  const MatrixXd L = mat2(1, 0, 0, 0);
  EXPECT_TRUE(probe_R0(Map::linear(L), o2(), opts(200)).has_counterexample());
  EXPECT_EQ(oracle::lcp_zero_has_nonzero_solution(L), std::optional<bool>(true));
}

TEST(R0, AgreesWithLcpBruteForce) {
  std::mt19937_64 rng(103);
  int checked = 0;
  for (int k = 0; checked < 30 && k < 500; ++k) {
    const int n = 2 + k % 4;
    const MatrixXd L = oracle::small_integer_matrix(n, rng);
    const auto truth = oracle::lcp_zero_has_nonzero_solution(L);
    if (!truth) continue;
    const auto a = builtin("orthant(" + std::to_string(n) + ")");
    EXPECT_EQ(probe_R0(Map::linear(L), a, opts(200, k)).has_counterexample(), *truth) << L;
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(Lipschitz, ExactAndSampled) {
  const auto a = builtin("psd(3)");
  const auto id = estimate_lipschitz(Map::identity(a), a);
  EXPECT_TRUE(id.exact);
  EXPECT_NEAR(id.kappa, 1.0, 1e-12);
  EXPECT_NEAR(estimate_lipschitz(Map::linear(mat2(3, 0, 0, 1)), o2()).kappa, 3.0, 1e-12);
  const Map P = Map::callable([](const Element& x) { return proj_K(x); }, "projection");
  const auto k = estimate_lipschitz(P, builtin("vinberg5"), opts(300));
  EXPECT_FALSE(k.exact);
  EXPECT_LE(k.kappa, 1.0 + 1e-8);
}

TEST(Admissible, IdentityAndNegative) {
  for (const char* name : {"orthant(3)", "vinberg5", "psd(3)"}) {
    const auto a = builtin(name);
    EXPECT_FALSE(check_B_admissible(Map::identity(a), a, opts(2000)).has_counterexample()) << name;
    const Map neg = Map::linear(-MatrixXd::Identity(a->hermitian_dim(), a->hermitian_dim()));
    EXPECT_TRUE(check_B_admissible(neg, a, opts(100)).has_counterexample()) << name;
  }
}

TEST(Probe, DeterministicFromSeed) {
  const auto a = builtin("vinberg5");
  const InstanceBundle b = random_problem(a, "builtin:vinberg5", 4, ProblemClass::skew);
  for (const auto& name : property_names()) {
    const auto v1 = probe(name, b.problem.F, a, opts(200, 9));
    const auto v2 = probe(name, b.problem.F, a, opts(200, 9));
    EXPECT_EQ(v1.outcome, v2.outcome) << name;
    EXPECT_EQ(v1.value, v2.value) << name;
    if (v1.witness_x) EXPECT_EQ(v1.witness_x->coeffs(), v2.witness_x->coeffs()) << name;
  }
  EXPECT_THROW(probe("Q", b.problem.F, a), std::invalid_argument);
}

TEST(Audit, IdentityChainHolds) {
  const auto a = builtin("orthant(3)");
  const auto r = implication_audit(Map::identity(a), a, opts(300));
  EXPECT_TRUE(r.consistent());
  for (const char* p : {"strongly_monotone", "uniform_trace_P", "trace_P", "trace_P0"})
    EXPECT_FALSE(r.get(p).has_counterexample()) << p;
  EXPECT_NEAR(*r.get("strongly_monotone").modulus, 1.0, 1e-9);
}

TEST(Audit, SkewMonotoneButNotTraceP) {
  const auto r = implication_audit(Map::linear(mat2(0, -1, 1, 0)), o2(), opts(300));
  EXPECT_TRUE(r.consistent());
  EXPECT_FALSE(r.get("monotone").has_counterexample());
  EXPECT_TRUE(r.get("trace_P").has_counterexample());
  EXPECT_FALSE(r.get("trace_P0").has_counterexample());
}

TEST(Audit, RandomStronglyMonotone) {
  std::mt19937_64 rng(107);
  for (const char* name : {"orthant(4)", "psd(3)", "vinberg5"}) {
    const auto a = builtin(name);
    const int m = a->hermitian_dim();
    const MatrixXd M = MatrixXd::Identity(m, m) + 0.1 * oracle::small_integer_matrix(m, rng);
    const auto r = implication_audit(Map::linear(M), a, opts(2000));
    EXPECT_TRUE(r.consistent()) << name;
    for (const auto& s : r.inconsistencies) ADD_FAILURE() << s;
  }
}

TEST(Audit, ChainEdges) {
  const auto& chain = implication_chain();
  auto has = [&](const std::string& a, const std::string& b) {
    return std::any_of(chain.begin(), chain.end(), [&](const ChainEdge& e) { return e.stronger == a && e.weaker == b; });
  };
  EXPECT_TRUE(has("strongly_monotone", "uniform_trace_P"));
  EXPECT_TRUE(has("uniform_trace_P", "trace_P"));
  EXPECT_TRUE(has("trace_P", "trace_P0"));
}
