#include "hcone/properties.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace hcone {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(Outcome o) {
  return o == Outcome::counterexample ? "counterexample" : "no_counterexample";
}

std::string to_string(TraceExponent e) { return e == TraceExponent::squared ? "squared" : "literal"; }

Sampler gaussian_sampler(const AlgebraPtr& algebra, double scale) {
  const MatrixXd Rinv = algebra->hermitian_metric_sqrt().inverse();
  return [algebra, Rinv, scale](std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXd w(Rinv.rows());
    for (auto& c : w) c = g(rng);
    return from_hermitian(algebra, scale * (Rinv * w));
  };
}

Sampler cone_sampler(const AlgebraPtr& algebra) {
  return [algebra](std::mt19937_64& rng) {
    for (;;) {
      std::normal_distribution<double> g(0.0, 1.0);
      Element t(algebra);
      for (int k : algebra->upper_indices()) t.coeffs()[k] = g(rng);
      for (int i = 0; i < algebra->rank(); ++i) t.set_diagonal_value(i, std::abs(t.diagonal_value(i)));
      Element x = mul(t, star(t));
      const double n = norm(x);
      if (n > 0.0) return Element((1.0 / n) * x);
    }
  };
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kChunk = 250;

struct Context {
  const Map& F;
  AlgebraPtr alg;
  const ProbeOptions& opts;
  Map B;
  std::vector<Element> units;

  Context(const Map& F_, const AlgebraPtr& alg_, const ProbeOptions& opts_)
      : F(F_), alg(alg_), opts(opts_), B(opts_.B ? *opts_.B : Map::identity(alg_)) {
    for (int i = 0; i < alg->rank(); ++i) units.push_back(unit(alg, i));
  }
  int rank() const { return alg->rank(); }
};

// One sampled pair with the quantities shared by all pointwise predicates.
struct Point {
  Element x, y, z, w;
  double nz = 0.0, nw = 0.0;
  double tol = 0.0;  // roundoff threshold for this pair
  double zw = 0.0;   // <z, w>
  std::vector<double> t{};  // <zw, e_i>
  double m = 0.0;         // max_i t_i
};

std::vector<double> trace_terms(const Context& c, const Element& a) {
  std::vector<double> t;
  for (const auto& e : c.units) t.push_back(inner(a, e));
  return t;
}

Point make_point(const Context& c, const Element& x, const Element& y) {
  Point p{x, y, x - y, c.F.difference(x, y)};
  p.nz = norm(p.z);
  p.nw = norm(p.w);
  p.tol = 10.0 * kEps * p.nz * (p.nw + p.nz);
  p.zw = inner(p.z, p.w);
  p.t = trace_terms(c, mul(p.z, p.w));
  p.m = *std::max_element(p.t.begin(), p.t.end());
  return p;
}

std::vector<int> argmax_of(const std::vector<double>& t) {
  const double m = *std::max_element(t.begin(), t.end());
  double scale = 0.0;
  for (double v : t) scale = std::max(scale, std::abs(v));
  std::vector<int> idx;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= m - 1e-12 * scale) idx.push_back(static_cast<int>(i));
  return idx;
}

enum class Tri { holds, violated, indeterminate };

struct Eval {
  Tri status = Tri::holds;
  double value = 0.0;
  double threshold = 0.0;
  std::optional<double> epsilon;
  std::vector<int> argmax;
};

// Perturbed map value w + eps B(z) and its trace terms.
struct Perturbed {
  Element w;
  std::vector<double> t;
  double m;
};

Perturbed perturb(const Context& c, const Point& p, double eps) {
  Perturbed q{p.w + eps * c.B(p.z), {}, 0.0};
  q.t = trace_terms(c, mul(p.z, q.w));
  q.m = *std::max_element(q.t.begin(), q.t.end());
  return q;
}

Eval eval_monotone(const Point& p) {
  return {p.zw < -p.tol ? Tri::violated : Tri::holds, p.zw, -p.tol, {}, {}};
}

Eval eval_strict(const Point& p) {
  return {p.zw <= p.tol ? Tri::violated : Tri::holds, p.zw, p.tol, {}, {}};
}

Eval eval_trace(const Context& c, const Point& p) {
  const double thr = p.tol / c.rank();
  return {p.m <= thr ? Tri::violated : Tri::holds, p.m, thr, {}, argmax_of(p.t)};
}

Eval eval_trace_P0(const Context& c, const Point& p) {
  const double thr = p.tol / c.rank();
  Eval out{Tri::holds, std::numeric_limits<double>::infinity(), thr, {}, {}};
  for (double eps : c.opts.epsilon_grid) {
    const Perturbed q = perturb(c, p, eps);
    if (q.m <= thr) return {Tri::violated, q.m, thr, eps, argmax_of(q.t)};
    out.value = std::min(out.value, q.m);
  }
  return out;
}

// S(z, w) = sum_{l >= j} (a_lj + a_lj*) - sum_i a_ii with a = zw.
Element p_expression(const Element& a) {
  const auto& alg = a.algebra();
  Element lower(a.algebra_ptr());
  for (int l = 0; l < alg.rank(); ++l)
    for (int j = 0; j <= l; ++j)
      if (alg.block_dim(l, j) > 0) lower.block(l, j) = a.block(l, j);
  Element s = lower + star(lower);
  for (int i = 0; i < alg.rank(); ++i) s.set_diagonal_value(i, a.diagonal_value(i));
  return s;
}

// Hypothesis S in -(K + K*). The diagonal of S equals that of zw, and each
// e_i lies in K n K*, so a positive trace term already refutes membership.
Eval eval_P_with(const Context& c, const Point& p, const Element& w, const std::vector<double>& t) {
  const double thr = p.tol / c.rank();
  const double m = *std::max_element(t.begin(), t.end());
  if (m > thr) return {Tri::holds, m, thr, {}, {}};
  const Element S = p_expression(mul(p.z, w));
  const SumVerdict v = member_sum(-S, c.opts.sum);
  if (v.member) return {Tri::violated, v.distance, c.opts.sum.projection.tol.sum, {}, argmax_of(t)};
  if (!v.converged) return {Tri::indeterminate, v.distance, 0.0, {}, {}};
  return {Tri::holds, v.distance, 0.0, {}, {}};
}

Eval eval_P(const Context& c, const Point& p) { return eval_P_with(c, p, p.w, p.t); }

Eval eval_P0(const Context& c, const Point& p) {
  Eval worst;
  for (double eps : c.opts.epsilon_grid) {
    const Perturbed q = perturb(c, p, eps);
    Eval e = eval_P_with(c, p, q.w, q.t);
    e.epsilon = eps;
    if (e.status == Tri::violated) return e;
    if (e.status == Tri::indeterminate) worst = e;
  }
  return worst;
}

// (z ^_K w) in -(K n K*) and (z v_K w) in K + K*.
Eval eval_order_P_with(const Context& c, const Point& p, const Element& w) {
  try {
    const Element P = proj_K(p.z - w, c.opts.sum.projection);
    const Element wedge_zw = p.z - P;
    const Element vee_zw = w + P;
    if (!member_intersection(-wedge_zw, c.opts.sum.projection.tol)) return {Tri::holds, 0.0, 0.0, {}, {}};
    const SumVerdict v = member_sum(vee_zw, c.opts.sum);
    if (v.member) return {Tri::violated, v.distance, c.opts.sum.projection.tol.sum, {}, {}};
    if (!v.converged) return {Tri::indeterminate, v.distance, 0.0, {}, {}};
    return {Tri::holds, v.distance, 0.0, {}, {}};
  } catch (const ProjectionFailure&) {
    return {Tri::indeterminate, 0.0, 0.0, {}, {}};
  }
}

Eval eval_order_P(const Context& c, const Point& p) { return eval_order_P_with(c, p, p.w); }

Eval eval_order_P0(const Context& c, const Point& p) {
  Eval worst;
  for (double eps : c.opts.epsilon_grid) {
    Eval e = eval_order_P_with(c, p, p.w + eps * c.B(p.z));
    e.epsilon = eps;
    if (e.status == Tri::violated) return e;
    if (e.status == Tri::indeterminate) worst = e;
  }
  return worst;
}

using PointEval = std::function<Eval(const Point&)>;
using Ratio = std::function<double(const Point&)>;

struct ScanResult {
  std::optional<Point> witness;
  Eval witness_eval;
  double min_ratio = std::numeric_limits<double>::infinity();
  long samples = 0;
  long indeterminate = 0;
};

// Evaluates `eval` on opts.samples random pairs in fixed-size seeded chunks.
// Chunks run concurrently; the reported witness is the first one of the
// lowest chunk, so results do not depend on scheduling.
ScanResult scan(const Context& c, const PointEval& eval, const Ratio& ratio) {
  const Sampler base = c.opts.sampler ? *c.opts.sampler : gaussian_sampler(c.alg);
  const Sampler dir = gaussian_sampler(c.alg);
  const long n = std::max<long>(0, c.opts.samples);
  const long chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::future<ScanResult>> jobs;
  for (long k = 0; k < chunks; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      ScanResult r;
      std::mt19937_64 rng(mix_seed(c.opts.seed, static_cast<std::uint64_t>(k)));
      const long count = std::min(kChunk, n - k * kChunk);
      for (long s = 0; s < count; ++s) {
        const Element x = base(rng);
        Element z = dir(rng);
        if (norm(z) == 0.0) continue;
        const Point p = make_point(c, x, x - z);
        ++r.samples;
        if (ratio) r.min_ratio = std::min(r.min_ratio, ratio(p));
        const Eval e = eval(p);
        if (e.status == Tri::indeterminate) ++r.indeterminate;
        if (e.status == Tri::violated) {
          r.witness = p;
          r.witness_eval = e;
          break;
        }
      }
      return r;
    }));
  }
  ScanResult out;
  for (auto& j : jobs) {
    ScanResult r = j.get();
    out.samples += r.samples;
    out.indeterminate += r.indeterminate;
    out.min_ratio = std::min(out.min_ratio, r.min_ratio);
    if (!out.witness && r.witness) {
      out.witness = r.witness;
      out.witness_eval = r.witness_eval;
    }
  }
  return out;
}

// Support-subset candidates for linear maps: eigenvectors of principal
// submatrices for real nonpositive eigenvalues, plus null vectors. On the
// orthant every non-P matrix has such a direction with z o Mz <= 0.
std::vector<Element> directed_candidates(const Context& c) {
  std::vector<Element> out;
  if (!c.F.is_linear() || !c.opts.directed) return out;
  const MatrixXd& M = c.F.matrix();
  const int m = static_cast<int>(M.rows());
  if (m > 20) return out;
  const double scale = std::max(1.0, M.norm());
  const long subsets = (1L << m) - 1;
  for (long mask = 1; mask <= subsets && static_cast<long>(out.size()) < c.opts.directed_budget; ++mask) {
    std::vector<int> idx;
    for (int k = 0; k < m; ++k)
      if (mask & (1L << k)) idx.push_back(k);
    const int s = static_cast<int>(idx.size());
    MatrixXd Ms(s, s);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) Ms(a, b) = M(idx[a], idx[b]);
    auto push = [&](const VectorXd& v) {
      VectorXd h = VectorXd::Zero(m);
      for (int a = 0; a < s; ++a) h[idx[a]] = v[a];
      if (h.norm() > 0.0) out.push_back(from_hermitian(c.alg, h / h.norm()));
    };
    Eigen::EigenSolver<MatrixXd> es(Ms);
    for (int k = 0; k < s; ++k) {
      const auto lam = es.eigenvalues()[k];
      if (std::abs(lam.imag()) <= 1e-12 * scale && lam.real() <= 1e-12 * scale)
        push(es.eigenvectors().col(k).real());
    }
  }
  return out;
}

void fill_witness(PropertyVerdict& v, const Point& p, const Eval& e) {
  v.outcome = Outcome::counterexample;
  v.witness_x = p.x;
  v.witness_y = p.y;
  v.value = e.value;
  v.threshold = e.threshold;
  v.argmax = e.argmax;
  v.epsilon = e.epsilon;
}

PropertyVerdict run_probe(const Context& c, const std::string& name, const PointEval& eval,
                          const Ratio& ratio, bool use_directed) {
  PropertyVerdict v;
  v.property = name;
  v.seed = c.opts.seed;
  const ScanResult r = scan(c, eval, ratio);
  v.samples = r.samples;
  v.indeterminate = r.indeterminate;
  double min_ratio = r.min_ratio;
  if (r.witness) fill_witness(v, *r.witness, r.witness_eval);
  if (use_directed) {
    const Element zero(c.alg);
    for (const Element& z : directed_candidates(c)) {
      const Point p = make_point(c, z, zero);
      ++v.directed_samples;
      if (ratio) min_ratio = std::min(min_ratio, ratio(p));
      if (v.has_counterexample()) continue;
      const Eval e = eval(p);
      if (e.status == Tri::indeterminate) ++v.indeterminate;
      if (e.status == Tri::violated) fill_witness(v, p, e);
    }
  }
  if (ratio && std::isfinite(min_ratio)) v.modulus = min_ratio;
  return v;
}

// Symmetric part of the whitened coordinate matrix R M R^-1.
MatrixXd whitened(const Context& c) {
  const MatrixXd& R = c.alg->hermitian_metric_sqrt();
  return R * c.F.matrix() * R.inverse();
}

}  // namespace

PropertyVerdict probe_monotone(const Map& F, const AlgebraPtr& algebra, MonotoneVariant variant,
                               const ProbeOptions& opts) {
  const Context c(F, algebra, opts);
  const std::string name = variant == MonotoneVariant::monotone ? "monotone"
                           : variant == MonotoneVariant::strict ? "strictly_monotone"
                                                                : "strongly_monotone";
  const PointEval eval = variant == MonotoneVariant::monotone ? PointEval(eval_monotone)
                                                              : PointEval(eval_strict);
  const Ratio ratio = [](const Point& p) { return p.zw / (p.nz * p.nz); };
  PropertyVerdict v = run_probe(c, name, eval, ratio, false);
  v.modulus_name = "mu";

  if (F.is_linear()) {
    const MatrixXd Mw = whitened(c);
    const MatrixXd S = 0.5 * (Mw + Mw.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    const double lmin = es.eigenvalues()[0];
    v.modulus = lmin;
    const VectorXd h = algebra->hermitian_metric_sqrt().triangularView<Eigen::Upper>().solve(
        VectorXd(es.eigenvectors().col(0)));
    const Element z = from_hermitian(algebra, h / norm(from_hermitian(algebra, h)));
    const Point p = make_point(c, z, Element(algebra));
    const Eval e = eval(p);
    ++v.directed_samples;
    if (e.status == Tri::violated) {
      fill_witness(v, p, e);
      v.exact = true;
      v.note = "eigenvector of the symmetrized map for lambda_min = " + std::to_string(lmin);
    } else if (!v.has_counterexample()) {
      v.exact = true;
      v.note = "lambda_min of the symmetrized map is " + std::to_string(lmin);
    }
  }
  return v;
}

PropertyVerdict probe_trace_P(const Map& F, const AlgebraPtr& algebra, TraceVariant variant,
                              const ProbeOptions& opts) {
  const Context c(F, algebra, opts);
  if (variant == TraceVariant::trace_P0) {
    return run_probe(c, "trace_P0", [&](const Point& p) { return eval_trace_P0(c, p); }, nullptr,
                     true);
  }
  const bool squared = opts.exponent == TraceExponent::squared;
  const Ratio ratio = [squared](const Point& p) {
    return p.m / (squared ? p.nz * p.nz : p.nz);
  };
  const std::string name = variant == TraceVariant::trace_P ? "trace_P" : "uniform_trace_P";
  PropertyVerdict v =
      run_probe(c, name, [&](const Point& p) { return eval_trace(c, p); }, ratio, true);
  v.modulus_name = "alpha";
  v.exponent = to_string(opts.exponent);
  return v;
}

PropertyVerdict probe_P(const Map& F, const AlgebraPtr& algebra, PVariant variant,
                        const ProbeOptions& opts) {
  const Context c(F, algebra, opts);
  switch (variant) {
    case PVariant::P:
      return run_probe(c, "P", [&](const Point& p) { return eval_P(c, p); }, nullptr, true);
    case PVariant::P0:
      return run_probe(c, "P0", [&](const Point& p) { return eval_P0(c, p); }, nullptr, true);
    case PVariant::order_P:
      return run_probe(c, "order_P", [&](const Point& p) { return eval_order_P(c, p); }, nullptr,
                       true);
    case PVariant::order_P0:
      return run_probe(c, "order_P0", [&](const Point& p) { return eval_order_P0(c, p); }, nullptr,
                       true);
  }
  throw std::logic_error("unknown P variant");
}

namespace {

// Distance-style test of w in K* with an absolute tolerance on unit scale.
Tri near_Kstar(const Element& w, double tol, const ProjectionOptions& popts) {
  if (norm(w) <= tol || in_Kstar(w, popts.tol)) return Tri::holds;
  try {
    return norm(project(-w, popts).proj_K()) <= tol ? Tri::holds : Tri::violated;
  } catch (const ProjectionFailure&) {
    return Tri::indeterminate;
  }
}

std::vector<Element> r0_directions(const Context& c) {
  std::vector<Element> out;
  const Element e = unit(c.alg);
  out.push_back((1.0 / norm(e)) * e);
  for (const auto& u : c.units) out.push_back((1.0 / norm(u)) * u);
  if (c.F.is_linear() && c.opts.directed) {
    const MatrixXd& M = c.F.matrix();
    const int m = static_cast<int>(M.rows());
    const double scale = std::max(1.0, M.norm());
    if (m <= 20) {
      const long subsets = (1L << m) - 1;
      for (long mask = 1; mask <= subsets && static_cast<long>(out.size()) < c.opts.directed_budget;
           ++mask) {
        std::vector<int> idx;
        for (int k = 0; k < m; ++k)
          if (mask & (1L << k)) idx.push_back(k);
        const int s = static_cast<int>(idx.size());
        MatrixXd Ms(s, s);
        for (int a = 0; a < s; ++a)
          for (int b = 0; b < s; ++b) Ms(a, b) = M(idx[a], idx[b]);
        Eigen::JacobiSVD<MatrixXd> svd(Ms, Eigen::ComputeFullV);
        const VectorXd& sv = svd.singularValues();
        for (int k = 0; k < s; ++k) {
          if (sv[k] > 1e-10 * scale) continue;
          VectorXd h = VectorXd::Zero(m);
          for (int a = 0; a < s; ++a) h[idx[a]] = svd.matrixV()(a, k);
          for (double sign : {1.0, -1.0}) {
            const Element d = from_hermitian(c.alg, sign * h);
            if (in_K(d)) out.push_back((1.0 / norm(d)) * d);
          }
        }
      }
    }
  }
  return out;
}

struct RayResult {
  Tri status = Tri::holds;
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<Element> ray;
  Element fx;
};

// Def.-style ray test along s * d for unit d in K: F(x)/||x|| near K* and
// max_i <x F(x), e_i> / ||x||^2 nonpositive at every scale of the schedule.
RayResult test_ray(const Context& c, const Element& d) {
  RayResult out{Tri::violated, -std::numeric_limits<double>::infinity(), {}, d};
  for (double s : c.opts.scale_schedule) {
    const Element x = s * d;
    const Element fx = c.F(x);
    const double nx = norm(x);
    const Element g = (1.0 / nx) * fx;
    const std::vector<double> t = trace_terms(c, mul(x, fx));
    const double ratio = *std::max_element(t.begin(), t.end()) / (nx * nx);
    out.ratio = std::max(out.ratio, ratio);
    out.ray.push_back(x);
    out.fx = fx;
    const Tri k = near_Kstar(g, 1e-8, c.opts.sum.projection);
    if (k == Tri::indeterminate) {
      out.status = Tri::indeterminate;
      return out;
    }
    if (k == Tri::violated || ratio > 1e-9 * (1.0 + norm(g))) {
      out.status = Tri::holds;
      out.ratio = ratio;
      return out;
    }
  }
  return out;
}

}  // namespace

PropertyVerdict probe_R0(const Map& F, const AlgebraPtr& algebra, const ProbeOptions& opts) {
  const Context c(F, algebra, opts);
  PropertyVerdict v;
  v.property = "R0";
  v.seed = opts.seed;
  v.modulus_name = "ratio";
  double min_ratio = std::numeric_limits<double>::infinity();
  auto consider = [&](const Element& d, bool directed) {
    (directed ? v.directed_samples : v.samples)++;
    const RayResult r = test_ray(c, d);
    if (r.status == Tri::indeterminate) ++v.indeterminate;
    if (r.status == Tri::holds && std::isfinite(r.ratio)) min_ratio = std::min(min_ratio, r.ratio);
    if (r.status == Tri::violated && !v.has_counterexample()) {
      v.outcome = Outcome::counterexample;
      v.witness_x = d;
      v.witness_y = F(d);
      v.ray = r.ray;
      v.value = r.ratio;
      v.threshold = 1e-9;
    }
  };
  for (const Element& d : r0_directions(c)) consider(d, true);
  const Sampler cs = cone_sampler(algebra);
  std::mt19937_64 rng(mix_seed(opts.seed, 0x7230));
  for (long s = 0; s < opts.samples && !v.has_counterexample(); ++s) consider(cs(rng), false);
  if (std::isfinite(min_ratio)) v.modulus = min_ratio;
  return v;
}

LipschitzEstimate estimate_lipschitz(const Map& F, const AlgebraPtr& algebra,
                                     const ProbeOptions& opts) {
  LipschitzEstimate out;
  if (F.is_linear()) {
    const Context c(F, algebra, opts);
    Eigen::JacobiSVD<MatrixXd> svd(whitened(c));
    out.kappa = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    out.exact = true;
    return out;
  }
  const Sampler base = opts.sampler ? *opts.sampler : gaussian_sampler(algebra);
  std::mt19937_64 rng(mix_seed(opts.seed, 0x11b));
  for (long s = 0; s < std::max<long>(2, opts.samples); ++s) {
    const Element x = base(rng);
    const Element y = base(rng);
    const double d = norm(x - y);
    if (d == 0.0) continue;
    out.kappa = std::max(out.kappa, norm(F(x) - F(y)) / d);
    ++out.samples;
  }
  return out;
}

PropertyVerdict lipschitz_verdict(const Map& F, const AlgebraPtr& algebra, const ProbeOptions& opts) {
  const LipschitzEstimate k = estimate_lipschitz(F, algebra, opts);
  PropertyVerdict v;
  v.property = "lipschitz";
  v.seed = opts.seed;
  v.samples = k.samples;
  v.modulus = k.kappa;
  v.modulus_name = "kappa";
  v.exact = k.exact;
  v.note = k.exact ? "operator norm in the trace metric" : "largest sampled difference quotient";
  return v;
}

PropertyVerdict check_B_admissible(const Map& B, const AlgebraPtr& algebra, const ProbeOptions& opts) {
  ProbeOptions o = opts;
  o.B.reset();
  const Context c(B, algebra, o);
  PropertyVerdict v;
  v.property = "B_admissible";
  v.seed = opts.seed;
  const Sampler base = opts.sampler ? *opts.sampler : gaussian_sampler(algebra);
  std::mt19937_64 rng(mix_seed(opts.seed, 0xb));
  double min_ratio = std::numeric_limits<double>::infinity();
  for (long s = 0; s < opts.samples; ++s) {
    const Element x = base(rng);
    if (norm(x) == 0.0) continue;
    ++v.samples;
    const Point p = make_point(c, x, Element(algebra));
    min_ratio = std::min(min_ratio, p.zw / (p.nz * p.nz));
    const double tmin = *std::min_element(p.t.begin(), p.t.end());
    const bool bad_inner = p.zw <= p.tol;
    const bool bad_trace = tmin < -p.tol;
    if (bad_inner || bad_trace) {
      v.outcome = Outcome::counterexample;
      v.witness_x = x;
      v.witness_y = B(x);
      v.value = bad_inner ? p.zw : tmin;
      v.threshold = bad_inner ? p.tol : -p.tol;
      v.note = bad_inner ? "<x, B(x)> is not positive" : "<x B(x), e_i> is negative";
      for (std::size_t i = 0; i < p.t.size(); ++i)
        if (bad_trace && p.t[i] < -p.tol) v.argmax.push_back(static_cast<int>(i));
      break;
    }
  }
  if (std::isfinite(min_ratio)) v.modulus = min_ratio;
  v.modulus_name = "min <x,Bx>/||x||^2";
  return v;
}

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {
      "monotone", "strictly_monotone", "strongly_monotone", "trace_P", "uniform_trace_P",
      "trace_P0", "P",                 "P0",                "order_P", "order_P0",
      "R0",       "lipschitz",         "B_admissible"};
  return names;
}

PropertyVerdict probe(const std::string& property, const Map& F, const AlgebraPtr& algebra,
                      const ProbeOptions& opts) {
  if (property == "monotone") return probe_monotone(F, algebra, MonotoneVariant::monotone, opts);
  if (property == "strictly_monotone") return probe_monotone(F, algebra, MonotoneVariant::strict, opts);
  if (property == "strongly_monotone") return probe_monotone(F, algebra, MonotoneVariant::strong, opts);
  if (property == "trace_P") return probe_trace_P(F, algebra, TraceVariant::trace_P, opts);
  if (property == "uniform_trace_P") return probe_trace_P(F, algebra, TraceVariant::uniform_trace_P, opts);
  if (property == "trace_P0") return probe_trace_P(F, algebra, TraceVariant::trace_P0, opts);
  if (property == "P") return probe_P(F, algebra, PVariant::P, opts);
  if (property == "P0") return probe_P(F, algebra, PVariant::P0, opts);
  if (property == "order_P") return probe_P(F, algebra, PVariant::order_P, opts);
  if (property == "order_P0") return probe_P(F, algebra, PVariant::order_P0, opts);
  if (property == "R0") return probe_R0(F, algebra, opts);
  if (property == "lipschitz") return lipschitz_verdict(F, algebra, opts);
  if (property == "B_admissible") return check_B_admissible(F, algebra, opts);
  throw std::invalid_argument("unknown property '" + property + "'");
}

const std::vector<ChainEdge>& implication_chain() {
  static const std::vector<ChainEdge> edges = {
      {"strongly_monotone", "uniform_trace_P"}, {"uniform_trace_P", "trace_P"},
      {"trace_P", "trace_P0"},                  {"strongly_monotone", "strictly_monotone"},
      {"strictly_monotone", "trace_P"},         {"trace_P", "P"},
      {"monotone", "trace_P0"},                 {"trace_P0", "P0"}};
  return edges;
}

const PropertyVerdict& AuditReport::get(const std::string& property) const {
  for (const auto& v : verdicts)
    if (v.property == property) return v;
  throw std::out_of_range("no verdict for " + property);
}

namespace {

const std::vector<std::string>& chain_properties() {
  static const std::vector<std::string> names = {"strongly_monotone", "strictly_monotone",
                                                 "monotone",          "uniform_trace_P",
                                                 "trace_P",           "trace_P0",
                                                 "P",                 "P0"};
  return names;
}

Eval eval_named(const Context& c, const std::string& name, const Point& p) {
  if (name == "monotone") return eval_monotone(p);
  if (name == "strictly_monotone" || name == "strongly_monotone") return eval_strict(p);
  if (name == "trace_P" || name == "uniform_trace_P") return eval_trace(c, p);
  if (name == "trace_P0") return eval_trace_P0(c, p);
  if (name == "P") return eval_P(c, p);
  if (name == "P0") return eval_P0(c, p);
  throw std::logic_error("no pointwise form for " + name);
}

}  // namespace

AuditReport implication_audit(const Map& F, const AlgebraPtr& algebra, const ProbeOptions& opts) {
  const Context c(F, algebra, opts);
  AuditReport rep;
  const auto& names = chain_properties();

  std::vector<PropertyVerdict> probes;
  for (const auto& n : names) probes.push_back(probe(n, F, algebra, opts));

  // Union of sampled pairs, directed candidates and every witness.
  std::vector<Point> points;
  {
    const Sampler base = opts.sampler ? *opts.sampler : gaussian_sampler(algebra);
    const Sampler dir = gaussian_sampler(algebra);
    std::mt19937_64 rng(mix_seed(opts.seed, 0xa0d17));
    for (long s = 0; s < opts.samples; ++s) {
      const Element x = base(rng);
      const Element z = dir(rng);
      if (norm(z) > 0.0) points.push_back(make_point(c, x, x - z));
    }
    const Element zero(algebra);
    for (const Element& z : directed_candidates(c)) points.push_back(make_point(c, z, zero));
    for (const auto& v : probes)
      if (v.witness_x && v.witness_y && norm(*v.witness_x - *v.witness_y) > 0.0)
        points.push_back(make_point(c, *v.witness_x, *v.witness_y));
  }
  rep.points = static_cast<long>(points.size());

  std::vector<std::vector<Tri>> status(names.size(), std::vector<Tri>(points.size(), Tri::holds));
  for (std::size_t k = 0; k < names.size(); ++k) {
    PropertyVerdict v = probes[k];
    v.samples = rep.points;
    v.indeterminate = 0;
    bool found = v.has_counterexample();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Eval e = eval_named(c, names[k], points[i]);
      status[k][i] = e.status;
      if (e.status == Tri::indeterminate) ++v.indeterminate;
      if (e.status == Tri::violated && !found) {
        if (v.exact)
          rep.inconsistencies.push_back(names[k] + ": exact certificate contradicted by point " +
                                        std::to_string(i));
        fill_witness(v, points[i], e);
        v.exact = false;
        found = true;
      }
    }
    rep.verdicts.push_back(std::move(v));
  }

  auto index = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  for (const auto& edge : implication_chain()) {
    const std::size_t a = index(edge.stronger), b = index(edge.weaker);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (status[b][i] == Tri::violated && status[a][i] == Tri::holds) {
        rep.inconsistencies.push_back(edge.stronger + " holds but " + edge.weaker +
                                      " fails at point " + std::to_string(i));
        break;
      }
    }
    const auto& va = rep.verdicts[a];
    const auto& vb = rep.verdicts[b];
    if (!va.has_counterexample() && vb.has_counterexample())
      rep.inconsistencies.push_back(edge.stronger + " has no counterexample but " + edge.weaker +
                                    " does");
  }
  return rep;
}

}  // namespace hcone
