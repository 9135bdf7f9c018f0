#pragma once

#include "hcone/properties.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcone {

struct BoundSample {
  double phi = 0.0;       // ||Phi(x)||
  double distance = 0.0;  // ||x - x*||
  double lower = 0.0;     // ||Phi|| / (2 + kappa)
  double upper = 0.0;     // (1 + kappa) ||Phi|| / alpha
  bool lower_ok = true;
  bool upper_ok = true;
  std::string regime;  // "near" or "far"
};

struct BoundReport {
  double kappa = 0.0;
  double alpha = 0.0;
  std::string kappa_source;
  std::string alpha_source;
  std::string exponent;
  double slack = 0.0;
  std::vector<BoundSample> samples;
  long lower_violations = 0;
  long upper_violations = 0;
  /// Largest excess over each inequality (<= 0 when it holds everywhere).
  double worst_lower_margin = 0.0;
  double worst_upper_margin = 0.0;
  bool xstar_diagonal = false;
  bool ystar_diagonal = false;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;

  bool hypothesis_holds() const { return xstar_diagonal && ystar_diagonal; }
  bool holds() const { return lower_violations == 0 && upper_violations == 0; }
  std::string to_csv() const;
};

struct BoundOptions {
  std::optional<double> kappa;
  std::optional<double> alpha;
  long samples = 1000;
  std::uint64_t seed = 1;
  /// Allowed excess, relative to max(1, ||x - x*||).
  double slack = 1e-8;
  /// Tolerance for the verification of x*.
  double verify_tol = 1e-6;
  TraceExponent exponent = TraceExponent::squared;
  ProjectionOptions projection;
};

/// Thrown when x* does not pass verify_solution.
class BoundPreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluates ||Phi||/(2+kappa) <= ||x - x*|| <= (1+kappa)||Phi||/alpha at
/// sampled x: Gaussian perturbations of x* with scales 1e-3..1 and far-field
/// points at scale 1e2, alternating.
///
/// Defaults: kappa is the Lipschitz estimate; alpha is mu/r when F is linear
/// with certified strong-monotonicity modulus mu (the trace sum is bounded by
/// r times the maximal term), otherwise the sampled uniform-trace-P modulus.
BoundReport check_bound(const HccpProblem& p, const Element& xstar, const BoundOptions& opts = {});

/// Both sides of the bound at a single point x (no slack).
BoundSample bound_sample(const HccpProblem& p, const Element& xstar, const Element& x, double kappa,
                         double alpha, const ProjectionOptions& opts = {});

/// True when every off-diagonal block of x vanishes within tol * max(1, ||x||).
bool is_diagonal_element(const Element& x, double tol = 1e-10);

}  // namespace hcone
