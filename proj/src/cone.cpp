#include "hcone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace hcone {

std::string to_string(MemberStatus s) {
  switch (s) {
    case MemberStatus::interior:
      return "interior";
    case MemberStatus::boundary:
      return "boundary";
    case MemberStatus::outside:
      return "outside";
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

void require_hermitian(const Element& x) {
  if (!is_hermitian(x, 1e-12)) throw AlgebraError("input element is not Hermitian");
}

double block_norm(const Element& a, int i, int j) {
  if (a.algebra().block_dim(i, j) == 0) return 0.0;
  return a.block(i, j).norm();
}

enum class Side { primal, dual };

// Shared elimination for tt* (primal, rows r..1) and t*t (dual, rows 1..r).
MembershipVerdict factorize(const Element& x_in, Side side, const ConeTolerances& tol) {
  require_hermitian(x_in);
  const AlgebraPtr& alg = x_in.algebra_ptr();
  const int r = alg->rank();
  MembershipVerdict out;

  const double scale = norm(x_in);
  Element t(alg);
  if (scale == 0.0) {
    out.status = MemberStatus::boundary;
    out.factor = t;
    return out;
  }
  const Element x = (1.0 / scale) * x_in;

  auto product = [&](const Element& f) {
    return side == Side::primal ? mul(f, star(f)) : mul(star(f), f);
  };

  std::vector<double> lambda(r, 0.0);
  bool boundary = false;
  auto pivot = [&](int i) -> bool {
    const Element rem = x - product(t);
    const double d = rem.diagonal_value(i);
    if (d < -tol.factor) {
      out.failing_block = i;
      out.failing_value = d;
      return false;
    }
    double lam = std::sqrt(std::max(d, 0.0));
    if (lam <= tol.diag) {
      lam = 0.0;
      boundary = true;
    }
    lambda[i] = lam;
    t.set_diagonal_value(i, lam);
    return true;
  };
  // Off-diagonal block (i,j) of t, determined through the pivot of block p.
  auto off_diagonal = [&](int i, int j, int p) -> bool {
    if (alg->block_dim(i, j) == 0) return true;
    const Element rem = x - product(t);
    if (lambda[p] == 0.0) {
      const double n = block_norm(rem, i, j);
      if (n > tol.factor) {
        out.failing_block = p;
        out.failing_value = n;
        return false;
      }
      return true;
    }
    t.block(i, j) = rem.block(i, j) / lambda[p];
    return true;
  };

  bool ok = true;
  if (side == Side::primal) {
    for (int i = r - 1; i >= 0 && ok; --i) {
      for (int j = r - 1; j > i && ok; --j) ok = off_diagonal(i, j, j);
      if (ok) ok = pivot(i);
    }
  } else {
    for (int i = 0; i < r && ok; ++i) {
      ok = pivot(i);
      for (int j = i + 1; j < r && ok; ++j) ok = off_diagonal(i, j, i);
    }
  }

  out.residual = ok ? norm(product(t) - x) * scale : std::numeric_limits<double>::infinity();
  if (!ok || out.residual > tol.factor * scale) {
    out.status = MemberStatus::outside;
    return out;
  }
  out.status = boundary ? MemberStatus::boundary : MemberStatus::interior;
  out.factor = std::sqrt(scale) * t;
  return out;
}

}  // namespace

MembershipVerdict factorize_K(const Element& x, const ConeTolerances& tol) {
  return factorize(x, Side::primal, tol);
}

MembershipVerdict factorize_Kstar(const Element& y, const ConeTolerances& tol) {
  return factorize(y, Side::dual, tol);
}

bool in_K(const Element& x, const ConeTolerances& tol) { return factorize_K(x, tol).member(); }
bool in_Kstar(const Element& y, const ConeTolerances& tol) {
  return factorize_Kstar(y, tol).member();
}

Element MoreauFactors::proj_K() const { return mul(u, star(u)); }
Element MoreauFactors::proj_Kstar() const { return mul(star(v), v); }

// ---------------------------------------------------------------------------
// Projection

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Least-squares system for the Moreau factors: unknowns are the T-coordinates
// of u and v; residual stacks the whitened uu* - v*v - x and the T-part of vu.
class MoreauSystem {
 public:
  MoreauSystem(const Element& x) : alg_(x.algebra_ptr()), x_(x) {
    const int n = alg_->dim();
    col_.assign(n, -1);
    const auto& up = alg_->upper_indices();
    for (std::size_t c = 0; c < up.size(); ++c) col_[up[c]] = static_cast<int>(c);
    star_to_.resize(n);
    for (const auto& s : alg_->star_terms()) star_to_[s.to].push_back(s);
  }

  int unknowns() const { return 2 * alg_->hermitian_dim(); }

  Element factor(const VectorXd& theta, int which) const {
    Element f(alg_);
    const auto& up = alg_->upper_indices();
    const int m = alg_->hermitian_dim();
    for (int c = 0; c < m; ++c) f.coeffs()[up[c]] = theta[which * m + c];
    return f;
  }

  VectorXd residual(const VectorXd& theta) const {
    const Element u = factor(theta, 0), v = factor(theta, 1);
    const Element d = mul(u, star(u)) - mul(star(v), v) - x_;
    const Element c = mul(v, u);
    return stack(d.coeffs(), c.coeffs());
  }

  MatrixXd jacobian(const VectorXd& theta) const {
    const Element u = factor(theta, 0), v = factor(theta, 1);
    const Element us = star(u), vs = star(v);
    const int n = alg_->dim();
    const int m = alg_->hermitian_dim();
    MatrixXd dP = MatrixXd::Zero(n, m), dN = MatrixXd::Zero(n, m);
    MatrixXd dCu = MatrixXd::Zero(n, m), dCv = MatrixXd::Zero(n, m);
    const auto& U = u.coeffs();
    const auto& V = v.coeffs();
    const auto& Us = us.coeffs();
    const auto& Vs = vs.coeffs();
    for (const auto& t : alg_->product_terms()) {
      const int cl = col_[t.left], cr = col_[t.right];
      // d(uu*) = E u* + u E*
      if (cl >= 0) dP(t.out, cl) += t.value * Us[t.right];
      for (const auto& s : star_to_[t.right])
        if (col_[s.from] >= 0) dP(t.out, col_[s.from]) += t.value * U[t.left] * s.value;
      // d(v*v) = E* v + v* E
      for (const auto& s : star_to_[t.left])
        if (col_[s.from] >= 0) dN(t.out, col_[s.from]) += t.value * s.value * V[t.right];
      if (cr >= 0) dN(t.out, cr) += t.value * Vs[t.left];
      // d(vu) = v dU + dV u
      if (cr >= 0) dCu(t.out, cr) += t.value * V[t.left];
      if (cl >= 0) dCv(t.out, cl) += t.value * U[t.right];
    }
    MatrixXd J(n + m, 2 * m);
    const MatrixXd& R = alg_->gram_sqrt();
    const bool ident = alg_->gram_is_identity();
    J.topLeftCorner(n, m) = ident ? dP : MatrixXd(R * dP);
    J.topRightCorner(n, m) = ident ? MatrixXd(-dN) : MatrixXd(-(R * dN));
    const MatrixXd Cu = ident ? dCu : MatrixXd(R * dCu);
    const MatrixXd Cv = ident ? dCv : MatrixXd(R * dCv);
    const auto& up = alg_->upper_indices();
    for (int c = 0; c < m; ++c) {
      J.block(n + c, 0, 1, m) = Cu.row(up[c]);
      J.block(n + c, m, 1, m) = Cv.row(up[c]);
    }
    return J;
  }

 private:
  VectorXd stack(const VectorXd& d, const VectorXd& c) const {
    const int n = alg_->dim();
    const int m = alg_->hermitian_dim();
    VectorXd r(n + m);
    const bool ident = alg_->gram_is_identity();
    r.head(n) = ident ? d : VectorXd(alg_->gram_sqrt() * d);
    const VectorXd cw = ident ? c : VectorXd(alg_->gram_sqrt() * c);
    const auto& up = alg_->upper_indices();
    for (int k = 0; k < m; ++k) r[n + k] = cw[up[k]];
    return r;
  }

  AlgebraPtr alg_;
  Element x_;
  std::vector<int> col_;
  std::vector<std::vector<TAlgebra::StarTerm>> star_to_;
};

// Least squares for min ||tt* - x|| over t in T.
class CholeskySystem {
 public:
  CholeskySystem(const Element& x) : alg_(x.algebra_ptr()), x_(x) {
    const int n = alg_->dim();
    col_.assign(n, -1);
    const auto& up = alg_->upper_indices();
    for (std::size_t c = 0; c < up.size(); ++c) col_[up[c]] = static_cast<int>(c);
    star_to_.resize(n);
    for (const auto& s : alg_->star_terms()) star_to_[s.to].push_back(s);
  }
  int unknowns() const { return alg_->hermitian_dim(); }
  Element factor(const VectorXd& theta) const {
    Element f(alg_);
    const auto& up = alg_->upper_indices();
    for (int c = 0; c < unknowns(); ++c) f.coeffs()[up[c]] = theta[c];
    return f;
  }
  VectorXd residual(const VectorXd& theta) const {
    const Element t = factor(theta);
    const VectorXd d = (mul(t, star(t)) - x_).coeffs();
    return alg_->gram_is_identity() ? d : VectorXd(alg_->gram_sqrt() * d);
  }
  MatrixXd jacobian(const VectorXd& theta) const {
    const Element t = factor(theta);
    const Element ts = star(t);
    MatrixXd dP = MatrixXd::Zero(alg_->dim(), unknowns());
    for (const auto& p : alg_->product_terms()) {
      if (col_[p.left] >= 0) dP(p.out, col_[p.left]) += p.value * ts.coeffs()[p.right];
      for (const auto& s : star_to_[p.right])
        if (col_[s.from] >= 0) dP(p.out, col_[s.from]) += p.value * t.coeffs()[p.left] * s.value;
    }
    return alg_->gram_is_identity() ? dP : MatrixXd(alg_->gram_sqrt() * dP);
  }

 private:
  AlgebraPtr alg_;
  Element x_;
  std::vector<int> col_;
  std::vector<std::vector<TAlgebra::StarTerm>> star_to_;
};

struct LmResult {
  VectorXd theta;
  double cost = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt with Nielsen damping updates.
template <typename System>
LmResult levenberg_marquardt(const System& sys, VectorXd theta, int max_iter, double tol) {
  VectorXd r = sys.residual(theta);
  double cost = 0.5 * r.squaredNorm();
  double lambda = -1.0;
  double nu = 2.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(2.0 * cost) <= tol) break;
    const MatrixXd J = sys.jacobian(theta);
    const MatrixXd A = J.transpose() * J;
    const VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <= 1e-30) break;
    if (lambda < 0.0) lambda = 1e-3 * std::max(1e-12, A.diagonal().maxCoeff());
    bool accepted = false;
    for (int inner = 0; inner < 30 && !accepted; ++inner) {
      MatrixXd M = A;
      M.diagonal().array() += lambda;
      const VectorXd step = M.ldlt().solve(-g);
      const VectorXd cand = theta + step;
      const VectorXd rc = sys.residual(cand);
      const double cost_c = 0.5 * rc.squaredNorm();
      const double predicted = -(step.dot(g) + 0.5 * step.dot(A * step));
      const double rho = predicted > 0.0 ? (cost - cost_c) / predicted : -1.0;
      if (cost_c < cost && rho > 0.0) {
        const double step_size = step.norm();
        theta = cand;
        r = rc;
        const double decrease = cost - cost_c;
        cost = cost_c;
        lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;
        accepted = true;
        if (step_size <= 1e-15 * (1.0 + theta.norm()) && decrease <= 1e-32) it = max_iter;
      } else {
        lambda *= nu;
        nu *= 2.0;
      }
    }
    if (!accepted) break;
  }
  return {theta, cost, it};
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return mix_seed(a, b); }

// Restricts a system to a subset of its unknowns; the rest stay at their base values.
template <typename System>
class MaskedSystem {
 public:
  MaskedSystem(const System& sys, VectorXd base, std::vector<int> free)
      : sys_(sys), base_(std::move(base)), free_(std::move(free)) {}

  VectorXd expand(const VectorXd& t) const {
    VectorXd theta = base_;
    for (std::size_t k = 0; k < free_.size(); ++k) theta[free_[k]] = t[k];
    return theta;
  }
  VectorXd restrict(const VectorXd& theta) const {
    VectorXd t(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) t[k] = theta[free_[k]];
    return t;
  }
  VectorXd residual(const VectorXd& t) const { return sys_.residual(expand(t)); }
  MatrixXd jacobian(const VectorXd& t) const {
    const MatrixXd J = sys_.jacobian(expand(t));
    MatrixXd out(J.rows(), free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) out.col(k) = J.col(free_[k]);
    return out;
  }

 private:
  const System& sys_;
  VectorXd base_;
  std::vector<int> free_;
};

VectorXd heuristic_start(const Element& x) {
  const auto& alg = x.algebra();
  const int m = alg.hermitian_dim();
  VectorXd theta = VectorXd::Zero(2 * m);
  const auto& up = alg.upper_indices();
  for (int c = 0; c < m; ++c) {
    const auto [i, j] = alg.block_of(up[c]);
    if (i == j) {
      const double d = x.diagonal_value(i);
      theta[c] = std::sqrt(std::max(d, 0.0)) + 0.1;
      theta[m + c] = std::sqrt(std::max(-d, 0.0)) + 0.1;
    } else {
      theta[c] = 0.5 * x.coeffs()[up[c]];
      theta[m + c] = -0.5 * x.coeffs()[up[c]];
    }
  }
  return theta;
}

VectorXd random_start(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd theta(2 * m);
  for (int k = 0; k < 2 * m; ++k) theta[k] = gauss(rng) / std::sqrt(static_cast<double>(m));
  return theta;
}

// Column flips for u and row flips for v leave uu*, v*v and vu = 0 intact.
void normalize_signs(Element& u, Element& v) {
  const auto& alg = u.algebra();
  const int r = alg.rank();
  for (int j = 0; j < r; ++j) {
    if (u.diagonal_value(j) < 0.0)
      for (int i = 0; i <= j; ++i)
        if (alg.block_dim(i, j) > 0) u.block(i, j) *= -1.0;
    if (v.diagonal_value(j) < 0.0)
      for (int l = j; l < r; ++l)
        if (alg.block_dim(j, l) > 0) v.block(j, l) *= -1.0;
  }
}

Element random_upper(const AlgebraPtr& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Element t(alg);
  for (int k : alg->upper_indices()) t.coeffs()[k] = gauss(rng);
  return t;
}

double kolmogorov_gap(const Element& x, const Element& P, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Element d = x - P;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Element t = random_upper(x.algebra_ptr(), rng);
    Element z = mul(t, star(t));
    const double nz = norm(z);
    if (nz == 0.0) continue;
    z *= 1.0 / nz;
    worst = std::max(worst, inner(z - P, d));
  }
  return samples > 0 ? worst : 0.0;
}

MoreauFactors evaluate(const Element& x, Element u, Element v, double scale) {
  normalize_signs(u, v);
  MoreauFactors f{u, v};
  const Element P = f.proj_K();
  const Element N = f.proj_Kstar();
  f.reconstruction_residual = norm(P - N - x);
  f.cross_residual = norm(mul(v, u));
  f.orthogonality = std::abs(inner(P, N));
  (void)scale;
  return f;
}

bool acceptable(const MoreauFactors& f, double scale, const ConeTolerances& tol) {
  return f.reconstruction_residual <= tol.moreau * scale && f.cross_residual <= tol.moreau * scale &&
         f.orthogonality <= tol.moreau * scale * scale && f.kolmogorov <= tol.kolmogorov;
}

double badness(const MoreauFactors& f, double scale) {
  return std::max({f.reconstruction_residual / scale, f.cross_residual / scale,
                   f.orthogonality / (scale * scale)});
}

}  // namespace

MoreauFactors project(const Element& x_in, const ProjectionOptions& opts) {
  require_hermitian(x_in);
  const AlgebraPtr& alg = x_in.algebra_ptr();
  const double scale = norm(x_in);
  if (scale == 0.0) {
    MoreauFactors f{Element(alg), Element(alg)};
    f.method = "zero";
    return f;
  }
  const Element x = (1.0 / scale) * x_in;
  const double root = std::sqrt(scale);

  auto finish = [&](MoreauFactors f) {
    f.u *= root;
    f.v *= root;
    f.reconstruction_residual *= scale;
    f.cross_residual *= scale;
    f.orthogonality *= scale * scale;
    return f;
  };
  auto validate = [&](MoreauFactors& f) {
    f.kolmogorov = kolmogorov_gap(x, f.proj_K(), opts.kolmogorov_samples, mix(opts.seed, 0xC0FFEE));
    return acceptable(f, 1.0, opts.tol);
  };

  // Diagonal algebras decouple into scalar clamps.
  if (alg->is_diagonal()) {
    Element pos(alg), neg(alg);
    for (int i = 0; i < alg->rank(); ++i) {
      const double d = x.diagonal_value(i);
      (d >= 0.0 ? pos : neg).set_diagonal_value(i, std::abs(d));
    }
    MoreauFactors f = evaluate(x, *factorize_K(pos, opts.tol).factor,
                               *factorize_Kstar(neg, opts.tol).factor, 1.0);
    f.method = "diagonal";
    if (validate(f)) return finish(f);
  }

  // Cone members project to themselves.
  if (const auto k = factorize_K(x, opts.tol); k.member()) {
    MoreauFactors f = evaluate(x, *k.factor, Element(alg), 1.0);
    f.method = "factorization";
    if (validate(f)) return finish(f);
  }
  if (const auto d = factorize_Kstar(-x, opts.tol); d.member()) {
    MoreauFactors f = evaluate(x, Element(alg), *d.factor, 1.0);
    f.method = "factorization";
    if (validate(f)) return finish(f);
  }

  const MoreauSystem sys(x);
  const int m = alg->hermitian_dim();
  const auto& up = alg->upper_indices();
  std::optional<MoreauFactors> best;
  VectorXd best_theta;
  for (int s = opts.first_start; s < opts.first_start + opts.starts; ++s) {
    const VectorXd theta0 = s == 0 ? heuristic_start(x) : random_start(m, mix(opts.seed, s));
    const LmResult lm = levenberg_marquardt(sys, theta0, opts.max_iterations, 1e-14);
    MoreauFactors f = evaluate(x, sys.factor(lm.theta, 0), sys.factor(lm.theta, 1), 1.0);
    f.start = s;
    f.iterations = lm.iterations;
    f.method = "moreau-lm";
    if (validate(f)) return finish(f);
    if (!best || badness(f, 1.0) < badness(*best, 1.0)) {
      best = f;
      best_theta = lm.theta;
    }
  }

  // Degenerate solutions stall LM; pin the vanishing rows of u and columns of v.
  if (best) {
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
      std::vector<int> free;
      VectorXd base = best_theta;
      for (int c = 0; c < m; ++c) {
        const auto [i, j] = alg->block_of(up[c]);
        const int ci = std::find(up.begin(), up.end(), alg->offset(i, i)) - up.begin();
        const int cj = std::find(up.begin(), up.end(), alg->offset(j, j)) - up.begin();
        if (std::abs(best_theta[ci]) < delta) base[c] = 0.0; else free.push_back(c);
        if (std::abs(best_theta[m + cj]) < delta) base[m + c] = 0.0; else free.push_back(m + c);
      }
      const MaskedSystem masked(sys, base, free);
      const LmResult lm = levenberg_marquardt(masked, masked.restrict(base), opts.max_iterations, 1e-14);
      const VectorXd theta = masked.expand(lm.theta);
      MoreauFactors f = evaluate(x, sys.factor(theta, 0), sys.factor(theta, 1), 1.0);
      f.start = best->start;
      f.iterations = best->iterations + lm.iterations;
      f.method = "moreau-lm-polish";
      if (validate(f)) return finish(f);
      if (badness(f, 1.0) < badness(*best, 1.0)) best = f;
    }
  }

  // Fallback: nearest tt*, then recover v from the complement.
  const CholeskySystem chol(x);
  for (int s = 0; s < opts.starts; ++s) {
    std::mt19937_64 rng(mix(opts.seed ^ 0xFA11BACCULL, s));
    const Element t0 = random_upper(alg, rng);
    const LmResult lm =
        levenberg_marquardt(chol, to_hermitian(t0), opts.max_iterations, 0.0);
    const Element u = chol.factor(lm.theta);
    const Element N = mul(u, star(u)) - x;
    const auto vn = factorize_Kstar(N, opts.tol);
    if (!vn.member()) continue;
    MoreauFactors f = evaluate(x, u, *vn.factor, 1.0);
    f.start = s;
    f.iterations = lm.iterations;
    f.method = "nearest-factor";
    if (validate(f)) return finish(f);
    if (!best || badness(f, 1.0) < badness(*best, 1.0)) best = f;
  }

  MoreauFactors worst = best ? *best : MoreauFactors{Element(alg), Element(alg)};
  std::ostringstream msg;
  msg << "projection did not converge (best residual " << (best ? badness(*best, 1.0) : -1.0) << ")";
  throw ProjectionFailure(msg.str(), finish(worst));
}

Element proj_K(const Element& x, const ProjectionOptions& opts) { return project(x, opts).proj_K(); }

Element proj_Kstar(const Element& x, const ProjectionOptions& opts) {
  return project(-x, opts).proj_Kstar();
}

Element wedge(const Element& x, const Element& y, const ProjectionOptions& opts) {
  require_same_algebra(x, y);
  return x - proj_K(x - y, opts);
}

Element vee(const Element& x, const Element& y, const ProjectionOptions& opts) {
  require_same_algebra(x, y);
  return y + proj_K(x - y, opts);
}

Element wedge_dual(const Element& x, const Element& y, const ProjectionOptions& opts) {
  require_same_algebra(x, y);
  return x - proj_Kstar(x - y, opts);
}

Element vee_dual(const Element& x, const Element& y, const ProjectionOptions& opts) {
  require_same_algebra(x, y);
  return y + proj_Kstar(x - y, opts);
}

// ---------------------------------------------------------------------------
// K + K*

bool member_intersection(const Element& z, const ConeTolerances& tol) {
  return in_K(z, tol) && in_Kstar(z, tol);
}

SumVerdict member_sum(const Element& z_in, const SumOptions& opts) {
  require_hermitian(z_in);
  const AlgebraPtr& alg = z_in.algebra_ptr();
  const auto& tol = opts.projection.tol;
  SumVerdict out;
  const double scale = norm(z_in);
  if (scale == 0.0) {
    out.member = out.converged = true;
    out.route = "zero";
    return out;
  }
  const Element z = (1.0 / scale) * z_in;

  if (in_K(z, tol) || in_Kstar(z, tol)) {
    out.member = out.converged = true;
    out.route = "factorization";
    return out;
  }
  // e_i lies in K n K*, so <z, e_i> < 0 separates.
  for (int i = 0; i < alg->rank(); ++i) {
    const double d = z.diagonal_value(i);
    if (d < -tol.sum) {
      out.converged = true;
      out.certificate = unit(alg, i);
      out.distance = -d / norm(unit(alg, i)) * scale;
      out.route = "separated-by-e" + std::to_string(i + 1);
      return out;
    }
  }

  Element a = proj_K(z, opts.projection);
  Element b = proj_Kstar(z - a, opts.projection);
  double dist = norm(z - a - b);
  int it = 0;
  for (; it < opts.max_iterations && dist > tol.sum; ++it) {
    a = proj_K(z - b, opts.projection);
    b = proj_Kstar(z - a, opts.projection);
    const double next = norm(z - a - b);
    const bool stalled = dist - next <= 1e-12 * std::max(1.0, dist) && next > 10.0 * tol.sum;
    dist = next;
    if (stalled) break;
  }
  out.iterations = it;
  out.distance = dist * scale;
  out.member = dist <= tol.sum;
  out.converged = out.member || it < opts.max_iterations;
  out.route = "alternating-projections";
  if (!out.member) {
    // The residual direction z - a - b points away from K + K*; its negative
    // is (approximately) in K n K*.
    Element w = a + b - z;
    if (inner(z, w) < 0.0) out.certificate = (1.0 / norm(w)) * w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complementarity report

bool ComplementarityReport::all_hold() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.holds; });
}

bool ComplementarityReport::consistent() const {
  if (conditions.empty()) return true;
  const bool first = conditions.front().holds;
  return std::all_of(conditions.begin(), conditions.end(),
                     [&](const ConditionResult& c) { return c.holds == first; });
}

const ConditionResult& ComplementarityReport::get(const std::string& label) const {
  for (const auto& c : conditions)
    if (c.label == label) return c;
  throw std::out_of_range("no condition " + label);
}

ComplementarityReport complementarity_report(const Element& x, const Element& y, double tol,
                                             const ProjectionOptions& opts) {
  require_same_algebra(x, y);
  require_hermitian(x);
  require_hermitian(y);
  const AlgebraPtr& alg = x.algebra_ptr();
  const int r = alg->rank();
  const double s = std::max({1.0, norm(x), norm(y)});
  const double lin = tol * s;
  const double bil = tol * s * s;

  ComplementarityReport rep;
  // Exact factors when the factorizations accept; otherwise factors of the
  // nearest cone points, accepted when within lin of the input.
  const auto fk = factorize_K(x, opts.tol);
  const auto fd = factorize_Kstar(y, opts.tol);
  std::optional<Element> u = fk.factor, v = fd.factor;
  rep.x_in_K = fk.member();
  rep.y_in_Kstar = fd.member();
  if (!rep.x_in_K) {
    const MoreauFactors m = project(x, opts);
    if (norm(x - m.proj_K()) <= lin) {
      rep.x_in_K = true;
      u = m.u;
    }
  }
  if (!rep.y_in_Kstar) {
    const MoreauFactors m = project(-y, opts);
    if (norm(y - m.proj_Kstar()) <= lin) {
      rep.y_in_Kstar = true;
      v = m.v;
    }
  }
  const bool cone_ok = rep.x_in_K && rep.y_in_Kstar;
  const std::string cone_detail = std::string("x ") + (rep.x_in_K ? "in" : "not in") + " K, y " +
                                  (rep.y_in_Kstar ? "in" : "not in") + " K*";

  const Element xy = mul(x, y);
  const Element yx = mul(y, x);
  rep.xy_inner = inner(x, y);
  double diag_max = 0.0;
  for (int i = 0; i < r; ++i) {
    rep.xy_diag.push_back(xy.diagonal_value(i));
    diag_max = std::max({diag_max, std::abs(xy.diagonal_value(i)), std::abs(yx.diagonal_value(i))});
  }

  // One projection of x - y serves (a) and (b).
  const MoreauFactors mf = project(x - y, opts);
  const double a_res = norm(x - mf.proj_K());
  const double b_res = norm(y - mf.proj_Kstar());
  rep.conditions.push_back({"a", a_res <= lin, a_res, "||x ^_K y||"});
  rep.conditions.push_back({"b", b_res <= lin, b_res, "||y ^_K* x||"});
  rep.conditions.push_back({"c", cone_ok && std::abs(rep.xy_inner) <= bil, std::abs(rep.xy_inner),
                            cone_detail + ", |<x,y>|"});
  rep.conditions.push_back({"d", cone_ok && diag_max <= bil, diag_max,
                            cone_detail + ", max |<xy,e_i>|, |<yx,e_i>|"});

  double e_res = std::numeric_limits<double>::infinity();
  if (cone_ok) e_res = norm(mul(*v, *u));
  // ||vu||^2 = <uu*, v*v>, so the bilinear tolerance applies to the square.
  rep.conditions.push_back({"e", cone_ok && e_res * e_res <= bil, e_res, "||vu|| for x = uu*, y = v*v"});

  double f_res = 0.0;
  for (int l = 0; l < r; ++l)
    for (int j = 0; j <= l; ++j)
      if (alg->block_dim(l, j) > 0) f_res = std::max(f_res, xy.block(l, j).norm());
  rep.conditions.push_back({"f", cone_ok && f_res <= bil, f_res, "max ||(xy)_lj||, l >= j"});
  return rep;
}

}  // namespace hcone
