#include "hcone/error_bound.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace hcone {

bool is_diagonal_element(const Element& x, double tol) {
  const auto& alg = x.algebra();
  const double s = std::max(1.0, norm(x));
  for (int i = 0; i < alg.rank(); ++i)
    for (int j = 0; j < alg.rank(); ++j)
      if (i != j && alg.block_dim(i, j) > 0 && x.block(i, j).norm() > tol * s) return false;
  return true;
}

std::string BoundReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "sample,phi,distance,lower,upper\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    os << k << ',' << s.phi << ',' << s.distance << ',' << s.lower << ',' << s.upper << '\n';
  }
  return os.str();
}

BoundSample bound_sample(const HccpProblem& p, const Element& xstar, const Element& x, double kappa,
                         double alpha, const ProjectionOptions& opts) {
  BoundSample s;
  s.phi = norm(natural_residual(p, x, opts));
  s.distance = norm(x - xstar);
  s.lower = s.phi / (2.0 + kappa);
  s.upper = alpha > 0.0 ? (1.0 + kappa) * s.phi / alpha : std::numeric_limits<double>::infinity();
  s.lower_ok = s.lower <= s.distance;
  s.upper_ok = s.distance <= s.upper;
  return s;
}

BoundReport check_bound(const HccpProblem& p, const Element& xstar, const BoundOptions& opts) {
  const ComplementarityReport ver = verify_solution(p, xstar, opts.verify_tol, opts.projection);
  if (!ver.all_hold()) throw BoundPreconditionError("x* does not solve the problem");

  BoundReport rep;
  rep.seed = opts.seed;
  rep.slack = opts.slack;
  rep.exponent = to_string(opts.exponent);
  rep.xstar_diagonal = is_diagonal_element(xstar);
  rep.ystar_diagonal = is_diagonal_element(p.y(xstar));
  if (!rep.hypothesis_holds())
    rep.warnings.push_back("x* or F(x*)+q is not diagonal; the upper inequality is not guaranteed");

  ProbeOptions po;
  po.seed = opts.seed;
  po.exponent = opts.exponent;
  if (opts.kappa) {
    rep.kappa = *opts.kappa;
    rep.kappa_source = "supplied";
  } else {
    const LipschitzEstimate k = estimate_lipschitz(p.F, p.algebra, po);
    rep.kappa = k.kappa;
    rep.kappa_source = k.exact ? "operator norm" : "sampled";
  }
  if (opts.alpha) {
    rep.alpha = *opts.alpha;
    rep.alpha_source = "supplied";
  } else {
    const PropertyVerdict strong = probe_monotone(p.F, p.algebra, MonotoneVariant::strong, po);
    if (strong.exact && !strong.has_counterexample() && strong.modulus && *strong.modulus > 0.0 &&
        opts.exponent == TraceExponent::squared) {
      rep.alpha = *strong.modulus / p.algebra->rank();
      rep.alpha_source = "certified mu/r";
    } else {
      const PropertyVerdict u = probe_trace_P(p.F, p.algebra, TraceVariant::uniform_trace_P, po);
      rep.alpha = u.modulus.value_or(0.0);
      rep.alpha_source = "sampled";
    }
  }
  if (!(rep.kappa > 0.0) || !(rep.alpha > 0.0))
    rep.warnings.push_back("kappa and alpha must be positive for the upper inequality");

  const double xn = norm(xstar);
  const Sampler g = gaussian_sampler(p.algebra);
  const long n = std::max<long>(0, opts.samples);
  std::vector<Element> xs;
  std::vector<std::string> regime;
  {
    std::mt19937_64 rng(mix_seed(opts.seed, 0xb0d));
    std::uniform_real_distribution<double> expo(-3.0, 0.0);
    for (long k = 0; k < n; ++k) {
      const Element d = g(rng);
      const double dn = std::max(norm(d), 1e-300);
      if (k % 2 == 0) {
        xs.push_back(xstar + (std::pow(10.0, expo(rng)) * std::max(1.0, xn) / dn) * d);
        regime.push_back("near");
      } else {
        xs.push_back(xstar + (1e2 / dn) * d);
        regime.push_back("far");
      }
    }
  }

  auto evaluate = [&](long k) {
    BoundSample s = bound_sample(p, xstar, xs[k], rep.kappa, rep.alpha, opts.projection);
    s.regime = regime[k];
    return s;
  };
  constexpr long chunk = 64;
  std::vector<std::future<std::vector<BoundSample>>> jobs;
  for (long start = 0; start < n; start += chunk) {
    jobs.push_back(std::async(std::launch::async, [&, start] {
      std::vector<BoundSample> out;
      for (long k = start; k < std::min(n, start + chunk); ++k) out.push_back(evaluate(k));
      return out;
    }));
  }
  std::vector<BoundSample> evaluated;
  for (auto& j : jobs)
    for (auto& s : j.get()) evaluated.push_back(std::move(s));

  rep.worst_lower_margin = -std::numeric_limits<double>::infinity();
  rep.worst_upper_margin = -std::numeric_limits<double>::infinity();
  for (auto& s : evaluated) {
    const double allow = opts.slack * std::max(1.0, s.distance);
    const double lower_excess = s.lower - s.distance;
    const double upper_excess = s.distance - s.upper;
    s.lower_ok = lower_excess <= allow;
    s.upper_ok = upper_excess <= allow;
    rep.worst_lower_margin = std::max(rep.worst_lower_margin, lower_excess);
    rep.worst_upper_margin = std::max(rep.worst_upper_margin, upper_excess);
    if (!s.lower_ok) ++rep.lower_violations;
    if (!s.upper_ok) ++rep.upper_violations;
    rep.samples.push_back(std::move(s));
  }
  if (rep.samples.empty()) rep.worst_lower_margin = rep.worst_upper_margin = 0.0;
  return rep;
}

}  // namespace hcone
