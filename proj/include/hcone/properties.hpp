#pragma once

#include "hcone/hccp.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hcone {

enum class Outcome { counterexample, no_counterexample };

std::string to_string(Outcome o);

/// Exponent of ||x - y|| in the uniform-trace-P modulus.
enum class TraceExponent { squared, literal };

std::string to_string(TraceExponent e);

/// Result of a sampled probe. A counterexample is a concrete violation that
/// re-evaluates deterministically; no_counterexample is never a proof unless
/// `exact` is set.
struct PropertyVerdict {
  std::string property;
  Outcome outcome = Outcome::no_counterexample;
  /// Witness pair (x, y); for R0 the direction x and F(x), with `ray` the
  /// sampled points of the ray.
  std::optional<Element> witness_x;
  std::optional<Element> witness_y;
  std::vector<Element> ray;
  /// Value of the tested quantity at the witness and the threshold it had to
  /// clear.
  double value = 0.0;
  double threshold = 0.0;
  /// Indices (0-based) attaining the maximum in trace-type probes.
  std::vector<int> argmax;
  /// Perturbation weight at the witness for P0-type probes.
  std::optional<double> epsilon;
  long samples = 0;
  long directed_samples = 0;
  long indeterminate = 0;
  std::optional<double> modulus;
  std::string modulus_name;
  std::string exponent;
  /// Verdict backed by an exact linear-algebra certificate.
  bool exact = false;
  std::uint64_t seed = 0;
  std::string note;

  bool has_counterexample() const { return outcome == Outcome::counterexample; }
};

/// Draws Hermitian elements.
using Sampler = std::function<Element(std::mt19937_64&)>;

/// Standard Gaussian in whitened Hermitian coordinates (isotropic in the trace
/// metric), scaled by `scale`.
Sampler gaussian_sampler(const AlgebraPtr& algebra, double scale = 1.0);
/// Unit-norm points tt* of K.
Sampler cone_sampler(const AlgebraPtr& algebra);

struct ProbeOptions {
  long samples = 1000;
  std::uint64_t seed = 1;
  /// Sampler for base points; difference directions are always drawn
  /// isotropically. Defaults to gaussian_sampler.
  std::optional<Sampler> sampler;
  /// Support-subset guided candidates for linear maps.
  bool directed = true;
  long directed_budget = 100000;
  TraceExponent exponent = TraceExponent::squared;
  /// Perturbation map for P0-type probes; identity when absent.
  std::optional<Map> B;
  std::vector<double> epsilon_grid = {1.0, 0.1, 0.01};
  std::vector<double> scale_schedule = {1e2, 1e4, 1e6};
  SumOptions sum;
};

enum class MonotoneVariant { monotone, strict, strong };
enum class TraceVariant { trace_P, uniform_trace_P, trace_P0 };
enum class PVariant { P, P0, order_P, order_P0 };

PropertyVerdict probe_monotone(const Map& F, const AlgebraPtr& algebra, MonotoneVariant variant,
                               const ProbeOptions& opts = {});
PropertyVerdict probe_trace_P(const Map& F, const AlgebraPtr& algebra, TraceVariant variant,
                              const ProbeOptions& opts = {});
PropertyVerdict probe_P(const Map& F, const AlgebraPtr& algebra, PVariant variant,
                        const ProbeOptions& opts = {});
PropertyVerdict probe_R0(const Map& F, const AlgebraPtr& algebra, const ProbeOptions& opts = {});

struct LipschitzEstimate {
  double kappa = 0.0;
  bool exact = false;
  long samples = 0;
};

/// Operator norm in the trace metric for linear maps, otherwise the largest
/// sampled ratio ||F(x) - F(y)|| / ||x - y||.
LipschitzEstimate estimate_lipschitz(const Map& F, const AlgebraPtr& algebra,
                                     const ProbeOptions& opts = {});
PropertyVerdict lipschitz_verdict(const Map& F, const AlgebraPtr& algebra,
                                  const ProbeOptions& opts = {});

/// Samples x != 0 and checks <x, B(x)> > 0 and <x B(x), e_i> >= 0.
PropertyVerdict check_B_admissible(const Map& B, const AlgebraPtr& algebra,
                                   const ProbeOptions& opts = {});

/// Names accepted by probe(): monotone, strictly_monotone, strongly_monotone,
/// trace_P, uniform_trace_P, trace_P0, P, P0, order_P, order_P0, R0,
/// lipschitz, B_admissible.
const std::vector<std::string>& property_names();
PropertyVerdict probe(const std::string& property, const Map& F, const AlgebraPtr& algebra,
                      const ProbeOptions& opts = {});

struct ChainEdge {
  std::string stronger;
  std::string weaker;
};

/// One-way implications between the pointwise-testable properties.
const std::vector<ChainEdge>& implication_chain();

struct AuditReport {
  std::vector<PropertyVerdict> verdicts;
  /// Human-readable descriptions of chain violations; empty when consistent.
  std::vector<std::string> inconsistencies;
  long points = 0;

  bool consistent() const { return inconsistencies.empty(); }
  const PropertyVerdict& get(const std::string& property) const;
};

/// Runs every chain probe on F, re-evaluates each property on the union of all
/// sampled and witness pairs, and checks the implication chain pointwise and
/// at the verdict level.
AuditReport implication_audit(const Map& F, const AlgebraPtr& algebra, const ProbeOptions& opts = {});

}  // namespace hcone
