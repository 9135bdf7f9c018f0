// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "hcone/instances.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hcone;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = HCONE_CORPUS_DIR;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Result {
  bool pass = true;
  std::ostringstream detail;
  double time_limit = 0.0;  // seconds; 0 means none

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

Element random_hermitian(const AlgebraPtr& a, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VectorXd h(a->hermitian_dim());
  for (int k = 0; k < h.size(); ++k) h[k] = g(rng);
  return from_hermitian(a, h);
}

std::vector<AlgebraPtr> all_builtins() {
  std::vector<AlgebraPtr> out;
  for (int n = 1; n <= 6; ++n) out.push_back(builtin("orthant(" + std::to_string(n) + ")"));
  for (int n = 1; n <= 4; ++n) out.push_back(builtin("psd(" + std::to_string(n) + ")"));
  out.push_back(builtin("vinberg5"));
  return out;
}

Element vinberg(double a, double b, double c, double d, double e) {
  return from_hermitian(builtin("vinberg5"), (VectorXd(5) << a, b, c, d, e).finished());
}

// 1
void vinberg_pair(Result& r) {
  r.time_limit = 1.0;
  const auto a = builtin("vinberg5");
  const Element x = load_element(kCorpus / "vinberg_pair.x.json", a);
  const Element y = load_element(kCorpus / "vinberg_pair.y.json", a);
  r.require(x.coeffs() == vinberg(5, -2, 1, -2, 5).coeffs(), "fixture x");
  r.require(y.coeffs() == vinberg(1, 2, 4, 2, 4).coeffs(), "fixture y");
  MatrixXd expected(3, 3);
  expected << -3, 2, 2, 0, 0, 0, 8, 0, 16;
  const Element xy = mul(x, y);
  r.require(as_scalar_matrix(xy) == expected, "product matrix");
  r.require(xy.diagonal_value(0) == -3.0, "<xy,e1> = -3");
  r.require(in_K(x), "x in K");
  r.require(in_Kstar(y), "y in K*");
  r.detail << "xy = [[-3,2,2],[0,0,0],[8,0,16]], <xy,e1> = " << xy.diagonal_value(0);
}

// 2
void axiom_suite(Result& r) {
  r.time_limit = 10.0;
  int specs = 0;
  for (int n = 1; n <= 6; ++n, ++specs) r.require(verify_axioms(orthant_spec(n)).all_passed(), "orthant");
  for (int n = 1; n <= 4; ++n, ++specs) r.require(verify_axioms(psd_spec(n)).all_passed(), "psd");
  r.require(verify_axioms(vinberg5_spec()).all_passed(), "vinberg5");
  ++specs;

  const TAlgebraSpec base = vinberg5_spec();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> delta(1, 3);
  auto bump = [&] { return (rng() % 2 ? 1.0 : -1.0) * delta(rng); };
  int mutations = 0, caught = 0;
  auto check = [&](const TAlgebraSpec& s, const std::string& what) {
    ++mutations;
    bool failed = false;
    try {
      failed = !verify_axioms(s).all_passed();
    } catch (const AlgebraError&) {
      failed = true;
    }
    caught += failed;
    r.require(failed, "mutation " + what + " not caught");
  };
  for (const auto& [key, values] : base.structure_constants) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      TAlgebraSpec s = base;
      s.structure_constants[key][k] += bump();
      check(s, "c" + std::to_string(key[0] + 1) + std::to_string(key[1] + 1) + std::to_string(key[2] + 1));
    }
  }
  for (const auto& [key, m] : base.involution_maps) {
    for (int k = 0; k < m.size(); ++k) {
      TAlgebraSpec s = base;
      s.involution_maps[key](k) += bump();
      check(s, "involution " + std::to_string(key[0] + 1) + std::to_string(key[1] + 1));
    }
  }
  for (std::size_t i = 0; i < base.rho.size(); ++i) {
    TAlgebraSpec s = base;
    s.rho[i] += bump();
    check(s, "rho" + std::to_string(i + 1));
  }
  r.detail << specs << " built-in specs pass; " << caught << "/" << mutations << " mutations caught";
}

// 3
void projection(Result& r) {
  r.time_limit = 300.0;
  std::mt19937_64 rng(3);
  double worst_rec = 0, worst_cross = 0, worst_orth = 0, worst_psd = 0, worst_orthant_ulp = 0;
  long total = 0;
  for (const auto& a : all_builtins()) {
    for (int k = 0; k < 1000; ++k, ++total) {
      const Element x = random_hermitian(a, rng, 2.0);
      const MoreauFactors f = project(x);
      worst_rec = std::max(worst_rec, norm(f.proj_K() - f.proj_Kstar() - x));
      worst_cross = std::max(worst_cross, norm(mul(f.v, f.u)));
      worst_orth = std::max(worst_orth, std::abs(inner(f.proj_K(), f.proj_Kstar())));
      const VectorXd p = to_hermitian(f.proj_K());
      if (a->is_diagonal()) {
        const VectorXd h = to_hermitian(x);
        for (int i = 0; i < h.size(); ++i)
          worst_orthant_ulp = std::max(worst_orthant_ulp, std::abs(p[i] - std::max(h[i], 0.0)) / (kEps * std::abs(h[i])));
      } else if (a->name().rfind("psd", 0) == 0) {
        worst_psd = std::max(worst_psd, (as_scalar_matrix(f.proj_K()) - oracle::psd_clip(as_scalar_matrix(x))).norm());
      }
    }
  }
  r.require(worst_rec <= 1e-6, "reconstruction");
  r.require(worst_cross <= 1e-6, "||vu||");
  r.require(worst_orth <= 1e-6, "orthogonality");
  r.require(worst_psd <= 1e-6, "psd oracle");
  r.require(worst_orthant_ulp <= 4.0, "orthant oracle");
  r.detail << total << " points; max ||uu*-v*v-x|| " << worst_rec << ", ||vu|| " << worst_cross << ", <uu*,v*v> "
           << worst_orth << ", psd dev " << worst_psd << ", orthant dev " << worst_orthant_ulp << " ulp";
}

// 4
void lattice_identity(Result& r) {
  std::mt19937_64 rng(4);
  double worst = 0;
  long total = 0;
  for (const auto& a : all_builtins()) {
    for (int k = 0; k < 1000; ++k, ++total) {
      const Element x = random_hermitian(a, rng), y = random_hermitian(a, rng);
      const Element lhs = mul(wedge(x, y), vee(x, y)), rhs = mul(x, y);
      for (int i = 0; i < a->rank(); ++i)
        worst = std::max(worst, std::abs(lhs.diagonal_value(i) - rhs.diagonal_value(i)));
    }
  }
  r.require(worst <= 1e-6, "identity");
  r.detail << total << " pairs; max deviation " << worst;
}

// 5
void boundary_structure(Result& r) {
  std::mt19937_64 rng(5);
  const std::vector<AlgebraPtr> algs = {builtin("orthant(3)"), builtin("psd(2)"), builtin("psd(3)"),
                                        builtin("psd(4)"), builtin("vinberg5")};
  double worst = 0, worst_factor = 0;
  int points = 0, boundary = 0;
  for (; points < 100; ++points) {
    const auto& a = algs[points % algs.size()];
    const int row = static_cast<int>(rng() % a->rank());
    Element t = upper_part(random_hermitian(a, rng));
    for (int i = 0; i < a->rank(); ++i) t.set_diagonal_value(i, 0.5 + std::abs(t.diagonal_value(i)));
    for (int j = 0; j < a->rank(); ++j)
      if (a->block_dim(row, j) > 0) t.block(row, j).setZero();
    const Element x = mul(t, star(t));
    double s = 0.0;
    for (int j = 0; j < a->rank(); ++j) s += x.block(row, j).norm() + x.block(j, row).norm();
    worst = std::max(worst, s);
    const auto v = factorize_K(x);
    if (v.status == MemberStatus::boundary && v.factor) {
      ++boundary;
      const Element tt = mul(*v.factor, star(*v.factor));
      double fs = 0.0;
      for (int j = 0; j < a->rank(); ++j) fs += v.factor->block(row, j).norm() + tt.block(row, j).norm();
      worst_factor = std::max(worst_factor, fs);
    }
  }
  r.require(worst <= 1e-8, "row/column identity");
  r.require(worst_factor <= 1e-8, "recovered factor row");
  r.require(boundary == points, "boundary status");

  int offdiag = 0, rejected = 0;
  for (const auto& a : {builtin("psd(2)"), builtin("psd(3)"), builtin("psd(4)"), builtin("vinberg5")}) {
    for (int k = 0; k < 250; ++k, ++offdiag) {
      Element x = random_hermitian(a, rng);
      for (int i = 0; i < a->rank(); ++i) x.set_diagonal_value(i, 0.0);
      rejected += factorize_K(x).status == MemberStatus::outside;
    }
  }
  r.require(rejected == offdiag, "off-diagonal rejection");
  r.detail << points << " boundary points (" << boundary << " classified boundary), max row/col mass " << worst
           << "; " << rejected << "/" << offdiag << " off-diagonal elements rejected";
}

// 6
void lcp_oracle(Result& r) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  int instances = 0, matched = 0, unique = 0;
  double worst = 0, worst_spread = 0;
  for (int n = 2; n <= 8; ++n) {
    const auto a = builtin("orthant(" + std::to_string(n) + ")");
    for (int k = 0; k < 50; ++k, ++instances) {
      const MatrixXd M = random_P_matrix(n, rng);
      VectorXd q(n);
      for (int i = 0; i < n; ++i) q[i] = g(rng);
      r.require(oracle::is_P_matrix(M), "generator produced a non-P matrix");
      const auto sols = oracle::lcp_enumerate(M, q);
      r.require(sols.size() == 1, "oracle found " + std::to_string(sols.size()) + " solutions");
      if (sols.size() != 1) continue;
      const HccpProblem p(a, Map::linear(M), from_hermitian(a, q));
      const auto runs = multistart(p, 20, mix_seed(6, instances));
      const double d = (to_hermitian(runs[0].x) - sols[0]).norm();
      worst = std::max(worst, d);
      const bool ok = runs[0].converged && d <= 1e-6;
      matched += ok;
      bool all = true;
      for (const auto& s : runs) all = all && s.converged && (to_hermitian(s.x) - sols[0]).norm() <= 1e-6;
      const double spread = solution_spread(runs);
      worst_spread = std::max(worst_spread, spread);
      unique += all && spread <= 1e-6;
      r.require(ok, "n=" + std::to_string(n) + " instance " + std::to_string(k) + " off by " + std::to_string(d));
      r.require(all && spread <= 1e-6, "multistart disagreement n=" + std::to_string(n));
    }
  }
  r.detail << matched << "/" << instances << " match enumeration (max err " << worst << "); " << unique << "/"
           << instances << " with 20 agreeing starts (max spread " << worst_spread << ")";
}

// 7
void existence(Result& r) {
  int failures = 0, total = 0;
  double worst = 0;
  for (const auto& ref : corpus_algebras()) {
    const AlgebraPtr a = load_algebra(ref);
    int found = 0;
    for (std::uint64_t seed = 70000; found < 50 && seed < 71000; ++seed) {
      const ProblemClass c = seed % 2 ? ProblemClass::P0_R0_candidate : ProblemClass::strongly_monotone;
      const InstanceBundle b = random_problem(a, ref, seed, c);
      const auto& cert = b.certified;
      if (std::find(cert.begin(), cert.end(), "R0") == cert.end() ||
          std::find(cert.begin(), cert.end(), "monotone") == cert.end())
        continue;
      ++found;
      ++total;
      const Solution s = solve(b.problem);
      worst = std::max(worst, s.residual_norm);
      if (!(s.converged && s.residual_norm <= 1e-6)) ++failures;
    }
    r.require(found == 50, "not enough certified bundles for " + ref);
  }
  r.require(failures == 0, std::to_string(failures) + " solves failed");
  r.detail << total << " certified monotone + R0 bundles; failures " << failures << ", max residual " << worst;
}

// 8
void error_bound(Result& r) {
  r.time_limit = 120.0;
  const auto a = builtin("orthant(1)");
  const Element one = from_hermitian(a, VectorXd::Constant(1, 1.0)), two = from_hermitian(a, VectorXd::Constant(1, 2.0));
  const BoundSample w = bound_sample(HccpProblem(a, Map::identity(a), -one), one, two, 1.0, 1.0);
  r.require(std::abs(w.lower - 1.0 / 3.0) <= 1e-15 && w.distance == 1.0 && w.upper == 2.0 && w.lower_ok && w.upper_ok,
            "scalar example");

  int instances = 0;
  long samples = 0, violations = 0;
  for (const auto& f : corpus_bundles(kCorpus)) {
    if (f.stem().string().rfind("orthant4_strongly_monotone_", 0) != 0) continue;
    const ProblemDocument d = load_problem(f);
    BoundOptions bo;
    bo.samples = 1000;
    bo.seed = d.bundle.seed;
    const BoundReport rep = check_bound(d.bundle.problem, *d.bundle.xstar, bo);
    r.require(rep.kappa_source == "operator norm" && rep.alpha_source == "certified mu/r",
              "constants not certified for " + f.stem().string());
    r.require(rep.hypothesis_holds(), "diagonal hypothesis");
    samples += static_cast<long>(rep.samples.size());
    violations += rep.lower_violations + rep.upper_violations;
    ++instances;
  }
  r.require(instances == 20, "expected 20 instances");
  r.require(violations == 0, "violations");
  r.detail << "worked example 1/3 <= 1 <= 2; " << instances << " instances, " << samples << " samples, "
           << violations << " violations";
}

// 9
void probe_oracles(Result& r) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  int matrices = 0, agree = 0, p_count = 0;
  for (; matrices < 100; ++matrices) {
    const int n = 2 + matrices % 7;
    MatrixXd M;
    switch (matrices % 4) {
      case 0:
      case 1:
        M = random_P_matrix(n, rng);
        break;
      case 2:
        M = MatrixXd(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) M(i, j) = g(rng);
        break;
      default:
        // P-matrix with one principal minor driven negative.
        M = random_P_matrix(n, rng);
        M(n - 1, n - 1) = -std::abs(g(rng)) - 0.1;
        break;
    }
    const bool isP = oracle::is_P_matrix(M);
    p_count += isP;
    ProbeOptions po;
    po.samples = 1000;
    po.seed = mix_seed(9, matrices);
    po.directed_budget = 100000;
    const auto v = probe_trace_P(Map::linear(M), builtin("orthant(" + std::to_string(n) + ")"),
                                 TraceVariant::trace_P, po);
    const bool ok = v.has_counterexample() == !isP;
    agree += ok;
    r.require(ok, "trace-P disagreement at matrix " + std::to_string(matrices));
  }

  int r0_total = 0, r0_agree = 0, r0_fail_count = 0, skipped = 0;
  for (int k = 0; r0_total < 100 && k < 5000; ++k) {
    const int n = 2 + k % 7;
    MatrixXd L = oracle::small_integer_matrix(n, rng);
    if (k % 3 == 0) {
      // Column j nonnegative with zero diagonal gives a nonzero LCP(L,0) solution e_j.
      const int j = static_cast<int>(rng() % n);
      L.col(j) = L.col(j).cwiseAbs();
      L(j, j) = 0.0;
    }
    const auto truth = oracle::lcp_zero_has_nonzero_solution(L);
    if (!truth) {
      ++skipped;
      continue;
    }
    ++r0_total;
    r0_fail_count += *truth;
    ProbeOptions po;
    po.samples = 500;
    po.seed = mix_seed(90, k);
    const bool ok = probe_R0(Map::linear(L), builtin("orthant(" + std::to_string(n) + ")"), po).has_counterexample() ==
                    *truth;
    r0_agree += ok;
    r.require(ok, "R0 disagreement at draw " + std::to_string(k));
  }
  r.require(r0_total == 100, "not enough R0 test matrices");
  r.detail << "trace-P " << agree << "/" << matrices << " agree (" << p_count << " P-matrices); R0 " << r0_agree << "/"
           << r0_total << " agree (" << r0_fail_count << " without R0, " << skipped << " draws skipped)";
}

// 10
void chain_audit(Result& r) {
  int bundles = 0, inconsistent = 0;
  long points = 0;
  for (const auto& f : corpus_bundles(kCorpus)) {
    const ProblemDocument d = load_problem(f);
    ProbeOptions po;
    po.samples = 1000;
    po.seed = d.bundle.seed;
    const AuditReport rep = implication_audit(d.bundle.problem.F, d.bundle.algebra, po);
    ++bundles;
    points += rep.points;
    if (!rep.consistent()) {
      ++inconsistent;
      r.require(false, f.stem().string() + ": " + rep.inconsistencies.front());
    }
  }
  r.require(bundles > 0, "no corpus bundles");
  r.detail << bundles << " bundles, " << points << " audited points, " << inconsistent << " inconsistent";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Result&)>>> criteria = {
      {"vinberg pair product and memberships", vinberg_pair},
      {"axiom suite and mutations", axiom_suite},
      {"Moreau decomposition and projection oracles", projection},
      {"wedge/vee trace identity", lattice_identity},
      {"boundary rows and off-diagonal rejection", boundary_structure},
      {"solver vs LCP enumeration and uniqueness", lcp_oracle},
      {"existence on certified monotone + R0 bundles", existence},
      {"global error bound", error_bound},
      {"probe vs principal-minor and LCP(L,0) oracles", probe_oracles},
      {"implication chain over the corpus", chain_audit},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.time_limit > 0.0) r.require(dt < r.time_limit, "runtime over " + std::to_string(r.time_limit) + " s");
    failed += !r.pass;
    std::printf("criterion %2zu: %s  %s [%.2f s] %s\n", k + 1, r.pass ? "PASS" : "FAIL", criteria[k].first.c_str(), dt,
                r.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
