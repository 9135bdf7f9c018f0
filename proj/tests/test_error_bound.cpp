#include "hcone/instances.hpp"

#include <gtest/gtest.h>

using namespace hcone;
using Eigen::VectorXd;

namespace {

Element scalar(double v) { return from_hermitian(builtin("orthant(1)"), VectorXd::Constant(1, v)); }

}  // namespace

TEST(ErrorBound, ScalarWorkedExample) {
  const auto a = builtin("orthant(1)");
  const HccpProblem p(a, Map::identity(a), scalar(-1.0));
  const BoundSample s = bound_sample(p, scalar(1.0), scalar(2.0), 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.phi, 1.0);
  EXPECT_DOUBLE_EQ(s.lower, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.distance, 1.0);
  EXPECT_DOUBLE_EQ(s.upper, 2.0);
  EXPECT_TRUE(s.lower_ok && s.upper_ok);

  const BoundSample z = bound_sample(p, scalar(1.0), scalar(1.0), 1.0, 1.0);
  EXPECT_EQ(z.phi, 0.0);
  EXPECT_EQ(z.distance, 0.0);
  EXPECT_EQ(z.upper, 0.0);
  EXPECT_TRUE(z.lower_ok && z.upper_ok);
}

TEST(ErrorBound, IdentityOnVinberg) {
  const auto a = builtin("vinberg5");
  const HccpProblem p(a, Map::identity(a), -unit(a));
  BoundOptions bo;
  bo.samples = 1000;
  const BoundReport r = check_bound(p, unit(a), bo);
  EXPECT_TRUE(r.hypothesis_holds());
  EXPECT_NEAR(r.kappa, 1.0, 1e-12);
  EXPECT_GT(r.alpha, 0.0);
  EXPECT_EQ(r.samples.size(), 1000u);
  EXPECT_EQ(r.lower_violations, 0);
  EXPECT_EQ(r.upper_violations, 0);
}

TEST(ErrorBound, OrthantStronglyMonotoneBundles) {
  const auto a = builtin("orthant(4)");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const InstanceBundle b = random_problem(a, "builtin:orthant(4)", seed, ProblemClass::strongly_monotone);
    BoundOptions bo;
    bo.samples = 400;
    bo.seed = seed;
    const BoundReport r = check_bound(b.problem, *b.xstar, bo);
    EXPECT_EQ(r.alpha_source, "certified mu/r");
    EXPECT_GE(r.alpha, b.constants.at("mu") / 4.0 - 1e-9);
    EXPECT_TRUE(r.holds()) << r.lower_violations << ' ' << r.upper_violations;
  }
}

TEST(ErrorBound, WrongSolutionIsRejected) {
  const auto a = builtin("vinberg5");
  const HccpProblem p(a, Map::identity(a), -unit(a));
  EXPECT_THROW(check_bound(p, 2.0 * unit(a)), BoundPreconditionError);
}

TEST(ErrorBound, NonDiagonalSolutionWarns) {
  const auto a = builtin("psd(2)");
  const Element x = from_hermitian(a, (VectorXd(3) << 1, 1, 1).finished());
  const HccpProblem p(a, Map::identity(a), -x);
  BoundOptions bo;
  bo.samples = 50;
  const BoundReport r = check_bound(p, x, bo);
  EXPECT_FALSE(r.hypothesis_holds());
  EXPECT_FALSE(r.warnings.empty());
}

TEST(ErrorBound, SuppliedConstantsAndCsv) {
  const auto a = builtin("orthant(1)");
  const HccpProblem p(a, Map::identity(a), scalar(-1.0));
  BoundOptions bo;
  bo.samples = 10;
  bo.kappa = 1.0;
  bo.alpha = 1.0;
  const BoundReport r = check_bound(p, scalar(1.0), bo);
  EXPECT_EQ(r.kappa_source, "supplied");
  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.rfind("sample,phi,distance,lower,upper\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_TRUE(r.holds());
}

TEST(ErrorBound, Deterministic) {
  const auto a = builtin("psd(3)");
  const InstanceBundle b = random_problem(a, "builtin:psd(3)", 2, ProblemClass::strongly_monotone);
  BoundOptions bo;
  bo.samples = 100;
  const BoundReport r1 = check_bound(b.problem, *b.xstar, bo), r2 = check_bound(b.problem, *b.xstar, bo);
  EXPECT_EQ(r1.to_csv(), r2.to_csv());
}
