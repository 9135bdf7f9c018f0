#include "hcone/hccp.hpp"

#include "hcone/instances.hpp"
#include "hcone/properties.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace hcone {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Map Map::linear(MatrixXd matrix, std::string name) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("linear map matrix must be square");
  Map m;
  m.linear_ = std::move(matrix);
  m.name_ = std::move(name);
  return m;
}

Map Map::identity(const AlgebraPtr& algebra) {
  const int n = algebra->hermitian_dim();
  return linear(MatrixXd::Identity(n, n), "identity");
}

Map Map::zero(const AlgebraPtr& algebra) {
  const int n = algebra->hermitian_dim();
  return linear(MatrixXd::Zero(n, n), "zero");
}

Map Map::callable(Callable f, std::string name) {
  Map m;
  m.f_ = std::move(f);
  m.name_ = std::move(name);
  return m;
}

Element Map::operator()(const Element& x) const {
  if (linear_) {
    if (linear_->rows() != x.algebra().hermitian_dim())
      throw AlgebraError("map dimension " + std::to_string(linear_->rows()) +
                         " does not match Hermitian dimension " +
                         std::to_string(x.algebra().hermitian_dim()));
    return from_hermitian(x.algebra_ptr(), *linear_ * to_hermitian(x));
  }
  return f_(x);
}

const MatrixXd& Map::matrix() const {
  if (!linear_) throw std::logic_error("map '" + name_ + "' is not linear");
  return *linear_;
}

Element Map::difference(const Element& x, const Element& y) const {
  if (linear_) return (*this)(x - y);
  return (*this)(x) - (*this)(y);
}

HccpProblem::HccpProblem(AlgebraPtr algebra_, Map F_, Element q_, std::string label_)
    : algebra(std::move(algebra_)), F(std::move(F_)), q(std::move(q_)), label(std::move(label_)) {
  if (!q.algebra().same_as(*algebra)) throw AlgebraError("q belongs to a different algebra");
  if (!is_hermitian(q, 1e-12)) throw AlgebraError("q is not Hermitian");
  if (F.is_linear() && F.matrix().rows() != algebra->hermitian_dim())
    throw AlgebraError("map dimension does not match the algebra");
}

Element natural_residual(const HccpProblem& p, const Element& x, const ProjectionOptions& opts) {
  return x - proj_K(x - p.F(x) - p.q, opts);
}

std::string to_string(SolveMethod m) { return m == SolveMethod::newton ? "newton" : "fixedpoint"; }

SolveMethod solve_method_from_string(const std::string& s) {
  if (s == "newton") return SolveMethod::newton;
  if (s == "fixedpoint") return SolveMethod::fixedpoint;
  throw std::invalid_argument("unknown method '" + s + "' (expected newton or fixedpoint)");
}

namespace {

// Projection that degrades to the best available factors instead of throwing;
// every result is re-checked by the complementarity report.
Element safe_proj_K(const Element& w, const ProjectionOptions& opts) {
  try {
    return proj_K(w, opts);
  } catch (const ProjectionFailure& e) {
    return e.best().proj_K();
  }
}

class Residual {
 public:
  Residual(const HccpProblem& p, const ProjectionOptions& opts)
      : p_(p), opts_(opts), R_(p.algebra->hermitian_metric_sqrt()) {}

  Element phi(const Element& x) const { return x - safe_proj_K(x - p_.y(x), opts_); }
  VectorXd phi(const VectorXd& h) const {
    return to_hermitian(phi(from_hermitian(p_.algebra, h)));
  }
  double norm(const VectorXd& phi_h) const { return (R_ * phi_h).norm(); }
  const MatrixXd& whitening() const { return R_; }

  /// Extragradient step with step size gamma, shrunk until
  /// gamma ||F(x) - F(xb)|| <= 0.9 ||x - xb||.
  VectorXd extragradient(const VectorXd& h, double& gamma) const {
    const Element x = from_hermitian(p_.algebra, h);
    const Element fx = p_.F(x);
    Element xb = x;
    for (int k = 0; k < 40; ++k, gamma *= 0.5) {
      xb = safe_proj_K(x - gamma * (fx + p_.q), opts_);
      if (gamma * hcone::norm(fx - p_.F(xb)) <= 0.9 * hcone::norm(x - xb)) break;
    }
    return to_hermitian(safe_proj_K(x - gamma * p_.y(xb), opts_));
  }

 private:
  const HccpProblem& p_;
  const ProjectionOptions& opts_;
  MatrixXd R_;
};

struct Iterate {
  VectorXd h;
  VectorXd phi;
  double res = std::numeric_limits<double>::infinity();
};

double step_size(const HccpProblem& p) {
  ProbeOptions po;
  po.samples = 20;
  const double kappa = estimate_lipschitz(p.F, p.algebra, po).kappa;
  return kappa > 1e-3 ? 0.9 / kappa : 1e3;
}

Iterate fixed_point_step(const Residual& R, const Iterate& cur, double& gamma) {
  Iterate t;
  t.h = R.extragradient(cur.h, gamma);
  t.phi = R.phi(t.h);
  t.res = R.norm(t.phi);
  return t;
}

Solution finish(const HccpProblem& p, const Iterate& best, int iterations, const std::string& method,
                const SolveOptions& opts) {
  Solution s{from_hermitian(p.algebra, best.h), Element(p.algebra), best.res, iterations, method,
             false, 0, {}};
  s.y = p.y(s.x);
  s.report = complementarity_report(s.x, s.y, opts.report_tol, opts.projection);
  s.converged = best.res <= opts.tol && s.report.all_hold();
  return s;
}

Solution solve_newton(const HccpProblem& p, const SolveOptions& opts, const Element& x0) {
  const Residual R(p, opts.projection);
  const int budget = opts.max_iterations > 0 ? opts.max_iterations : 200;
  const int m = p.algebra->hermitian_dim();
  double gamma = step_size(p);

  Iterate cur;
  cur.h = to_hermitian(x0);
  cur.phi = R.phi(cur.h);
  cur.res = R.norm(cur.phi);
  Iterate best = cur;
  int it = 0;
  for (; it < budget && best.res > opts.tol; ++it) {
    const double delta = 1e-6 * (1.0 + norm(from_hermitian(p.algebra, cur.h)));
    MatrixXd J(m, m);
    for (int k = 0; k < m; ++k) {
      VectorXd hk = cur.h;
      hk[k] += delta;
      J.col(k) = (R.phi(hk) - cur.phi) / delta;
    }
    const MatrixXd& W = R.whitening();
    const VectorXd d = (W * J).completeOrthogonalDecomposition().solve(-(W * cur.phi));

    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 20 && d.allFinite(); ++ls, t *= 0.5) {
      Iterate trial;
      trial.h = cur.h + t * d;
      trial.phi = R.phi(trial.h);
      trial.res = R.norm(trial.phi);
      // Armijo on 0.5 ||Phi||^2 with the Gauss-Newton model slope -||Phi||^2.
      if (trial.res * trial.res <= (1.0 - 2e-4 * t) * cur.res * cur.res) {
        cur = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) cur = fixed_point_step(R, cur, gamma);
    if (cur.res < best.res) best = cur;
  }
  return finish(p, best, it, "newton", opts);
}

Solution solve_fixed_point(const HccpProblem& p, const SolveOptions& opts, const Element& x0) {
  const Residual R(p, opts.projection);
  const int budget = opts.max_iterations > 0 ? opts.max_iterations : 5000;
  double gamma = step_size(p);

  Iterate cur;
  cur.h = to_hermitian(x0);
  cur.phi = R.phi(cur.h);
  cur.res = R.norm(cur.phi);
  Iterate best = cur;
  int it = 0;
  for (; it < budget && best.res > opts.tol; ++it) {
    cur = fixed_point_step(R, cur, gamma);
    if (cur.res < best.res) best = cur;
  }
  return finish(p, best, it, "fixedpoint", opts);
}

}  // namespace

Solution solve(const HccpProblem& p, const SolveOptions& opts) {
  const Element x0 = opts.x0 ? *opts.x0 : unit(p.algebra);
  if (!x0.algebra().same_as(*p.algebra)) throw AlgebraError("x0 belongs to a different algebra");
  return opts.method == SolveMethod::newton ? solve_newton(p, opts, x0)
                                            : solve_fixed_point(p, opts, x0);
}

std::vector<Solution> multistart(const HccpProblem& p, int starts, std::uint64_t seed,
                                 const SolveOptions& opts) {
  std::vector<std::future<Solution>> jobs;
  for (int s = 0; s < starts; ++s) {
    jobs.push_back(std::async(std::launch::async, [&p, &opts, s, seed] {
      SolveOptions o = opts;
      if (s > 0) o.x0 = random_cone_point(p.algebra, mix_seed(seed, s), true);
      Solution sol = solve(p, o);
      sol.start = s;
      return sol;
    }));
  }
  std::vector<Solution> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

double solution_spread(const std::vector<Solution>& sols) {
  double spread = 0.0;
  for (std::size_t a = 0; a < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b)
      if (sols[a].converged && sols[b].converged)
        spread = std::max(spread, norm(sols[a].x - sols[b].x));
  return spread;
}

ComplementarityReport verify_solution(const HccpProblem& p, const Element& x, double tol,
                                      const ProjectionOptions& opts) {
  return complementarity_report(x, p.y(x), tol, opts);
}

}  // namespace hcone
