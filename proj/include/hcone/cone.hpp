#pragma once

#include "hcone/talgebra.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcone {

/// Absolute tolerances applied to inputs rescaled to unit norm.
struct ConeTolerances {
  double factor = 1e-8;
  double diag = 1e-9;
  double moreau = 1e-8;
  double kolmogorov = 1e-8;
  double sum = 1e-7;
};

enum class MemberStatus { interior, boundary, outside };

std::string to_string(MemberStatus s);

/// SplitMix64-style combination used to derive per-stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct MembershipVerdict {
  MemberStatus status = MemberStatus::outside;
  /// t in T_+ with tt* = x (K) or t*t = y (K*); absent when outside.
  std::optional<Element> factor;
  double residual = 0.0;
  /// Diagonal block whose pivot went negative, or the row whose off-diagonal
  /// equation could not be met with a zero pivot; -1 when none.
  int failing_block = -1;
  double failing_value = 0.0;

  bool member() const { return status != MemberStatus::outside; }
};

/// Generalized Cholesky x = tt*, t upper triangular, eliminating from block r
/// down to 1. Throws AlgebraError for non-Hermitian input.
MembershipVerdict factorize_K(const Element& x, const ConeTolerances& tol = {});
/// y = t*t, eliminating from block 1 up to r.
MembershipVerdict factorize_Kstar(const Element& y, const ConeTolerances& tol = {});

bool in_K(const Element& x, const ConeTolerances& tol = {});
bool in_Kstar(const Element& y, const ConeTolerances& tol = {});

/// x = uu* - v*v with vu = 0 and u, v in T_+.
struct MoreauFactors {
  Element u;
  Element v;
  double reconstruction_residual = 0.0;  // ||uu* - v*v - x||
  double cross_residual = 0.0;           // ||vu||
  double orthogonality = 0.0;            // |<uu*, v*v>|
  double kolmogorov = 0.0;               // max sampled <z - P, x - P> over unit z in K
  int start = 0;
  int iterations = 0;
  std::string method{};

  Element proj_K() const;      // uu*
  Element proj_Kstar() const;  // v*v, the projection of -x onto K*
};

struct ProjectionOptions {
  /// Number of LM starts on the Moreau system before the fallback.
  int starts = 8;
  /// Index of the first start. Start 0 is the deterministic heuristic; other
  /// indices draw random factors, so different values give independent runs.
  int first_start = 0;
  int max_iterations = 1000;
  int kolmogorov_samples = 64;
  std::uint64_t seed = 0x5eedULL;
  ConeTolerances tol;
};

class ProjectionFailure : public std::runtime_error {
 public:
  ProjectionFailure(const std::string& what, MoreauFactors best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const MoreauFactors& best() const { return best_; }

 private:
  MoreauFactors best_;
};

/// Moreau decomposition of a Hermitian x. Throws ProjectionFailure when no
/// start yields validated factors.
MoreauFactors project(const Element& x, const ProjectionOptions& opts = {});

Element proj_K(const Element& x, const ProjectionOptions& opts = {});
Element proj_Kstar(const Element& x, const ProjectionOptions& opts = {});

/// x ^_K y = x - P_K(x - y)
Element wedge(const Element& x, const Element& y, const ProjectionOptions& opts = {});
/// x v_K y = y + P_K(x - y)
Element vee(const Element& x, const Element& y, const ProjectionOptions& opts = {});
/// x ^_{K*} y = x - P_{K*}(x - y)
Element wedge_dual(const Element& x, const Element& y, const ProjectionOptions& opts = {});
/// x v_{K*} y = y + P_{K*}(x - y)
Element vee_dual(const Element& x, const Element& y, const ProjectionOptions& opts = {});

struct SumVerdict {
  bool member = false;
  bool converged = false;
  double distance = 0.0;  // dist(z, K + K*) estimate, unscaled
  int iterations = 0;
  /// w in K n K* with <z, w> < 0 when a separating direction was found.
  std::optional<Element> certificate;
  std::string route;
};

struct SumOptions {
  int max_iterations = 10000;
  ProjectionOptions projection;
};

/// Decides z in K + K* by alternating projections on min ||z - a - b||,
/// a in K, b in K*.
SumVerdict member_sum(const Element& z, const SumOptions& opts = {});

/// K n K* membership through both factorizations.
bool member_intersection(const Element& z, const ConeTolerances& tol = {});

struct ConditionResult {
  std::string label;
  bool holds = false;
  double residual = 0.0;
  std::string detail;
};

/// Numerical evaluation of the equivalent complementarity conditions
/// (a) x^_K y = 0, (b) y^_{K*} x = 0, (c) x in K, y in K*, <x,y> = 0,
/// (d) ... and <xy,e_i> = <yx,e_i> = 0, (e) factors with vu = 0,
/// (f) ... and (xy)_lj = 0 for l >= j.
struct ComplementarityReport {
  std::vector<ConditionResult> conditions;
  /// <xy, e_i> for each i.
  std::vector<double> xy_diag;
  double xy_inner = 0.0;
  bool x_in_K = false;
  bool y_in_Kstar = false;

  bool all_hold() const;
  bool consistent() const;
  const ConditionResult& get(const std::string& label) const;
};

/// Residuals are compared against tol * s for linear quantities and tol * s^2
/// for bilinear ones, with s = max(1, ||x||, ||y||). Cone membership also
/// accepts points within distance tol * s of the cone.
ComplementarityReport complementarity_report(const Element& x, const Element& y, double tol = 1e-6,
                                             const ProjectionOptions& opts = {});

}  // namespace hcone
