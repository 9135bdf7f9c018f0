#pragma once

#include "hcone/cone.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hcone {

/// A map F: H -> H, either a dense matrix acting on Hermitian coordinates or
/// an arbitrary callable.
class Map {
 public:
  using Callable = std::function<Element(const Element&)>;

  static Map linear(Eigen::MatrixXd matrix, std::string name = "linear");
  static Map identity(const AlgebraPtr& algebra);
  static Map zero(const AlgebraPtr& algebra);
  static Map callable(Callable f, std::string name);

  Element operator()(const Element& x) const;

  bool is_linear() const { return linear_.has_value(); }
  /// Throws std::logic_error for callables.
  const Eigen::MatrixXd& matrix() const;
  const std::string& name() const { return name_; }

  /// F(x) - F(y).
  Element difference(const Element& x, const Element& y) const;

 private:
  std::optional<Eigen::MatrixXd> linear_;
  Callable f_;
  std::string name_;
};

/// Find x in K with y = F(x) + q in K* and <x, y> = 0.
struct HccpProblem {
  AlgebraPtr algebra;
  Map F;
  Element q;
  std::string label;

  HccpProblem(AlgebraPtr algebra, Map F, Element q, std::string label = "");

  Element y(const Element& x) const { return F(x) + q; }
};

/// Phi(x) = x ^_K (F(x) + q) = x - P_K(x - F(x) - q).
Element natural_residual(const HccpProblem& p, const Element& x,
                         const ProjectionOptions& opts = {});

/// newton: Gauss-Newton on Phi with a finite-difference Jacobian, Armijo line
/// search and an extragradient fallback step. fixedpoint: extragradient
/// projection method with adaptive step 0.9/kappa.
enum class SolveMethod { newton, fixedpoint };

std::string to_string(SolveMethod m);
SolveMethod solve_method_from_string(const std::string& s);

struct SolveOptions {
  SolveMethod method = SolveMethod::newton;
  double tol = 1e-8;
  /// Iteration budget; <= 0 selects 200 for newton and 5000 for fixedpoint.
  int max_iterations = 0;
  /// Starting point; e when absent.
  std::optional<Element> x0;
  /// Tolerance handed to the complementarity report of the result.
  double report_tol = 1e-6;
  ProjectionOptions projection;
};

struct Solution {
  Element x;
  Element y;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string method;
  bool converged = false;
  int start = 0;
  ComplementarityReport report;
};

/// Never throws on non-convergence; the best iterate is returned with
/// converged = false.
Solution solve(const HccpProblem& p, const SolveOptions& opts = {});

/// Runs `starts` independent solves from x0 = tt*, t in T_++ drawn from
/// per-start seeds (start 0 uses opts.x0 or e). Runs concurrently; results are
/// ordered by start index.
std::vector<Solution> multistart(const HccpProblem& p, int starts, std::uint64_t seed,
                                 const SolveOptions& opts = {});

/// Largest pairwise distance between converged solutions; 0 when fewer than two.
double solution_spread(const std::vector<Solution>& sols);

/// Complementarity conditions (a)-(f) with y = F(x) + q.
ComplementarityReport verify_solution(const HccpProblem& p, const Element& x, double tol = 1e-6,
                                      const ProjectionOptions& opts = {});

}  // namespace hcone
