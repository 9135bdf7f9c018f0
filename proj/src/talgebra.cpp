#include "hcone/talgebra.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace hcone {

namespace {

void validate_structure(const TAlgebraSpec& s) {
  const int r = s.rank;
  if (r < 1) throw AlgebraError("rank must be positive");
  if (static_cast<int>(s.block_dims.size()) != r)
    throw AlgebraError("block_dims must have rank rows");
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(s.block_dims[i].size()) != r)
      throw AlgebraError("block_dims must be rank x rank");
    for (int j = 0; j < r; ++j) {
      if (s.block_dims[i][j] < 0) throw AlgebraError("negative block dimension");
    }
    if (s.block_dims[i][i] != 1)
      throw AlgebraError("diagonal block A_" + std::to_string(i + 1) + std::to_string(i + 1) +
                         " must be one-dimensional");
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (s.block_dims[i][j] != s.block_dims[j][i])
        throw AlgebraError("block_dims must be symmetric");
  if (static_cast<int>(s.rho.size()) != r) throw AlgebraError("rho must have rank entries");
  for (double v : s.rho)
    if (!(v > 0.0)) throw AlgebraError("rho entries must be positive");

  for (const auto& [key, tensor] : s.structure_constants) {
    const auto [i, j, l] = key;
    if (i < 0 || j < 0 || l < 0 || i >= r || j >= r || l >= r)
      throw AlgebraError("structure constant index out of range");
    const std::size_t expected = static_cast<std::size_t>(s.block_dims[i][j]) *
                                 s.block_dims[j][l] * s.block_dims[i][l];
    if (tensor.size() != expected)
      throw AlgebraError("structure constant tensor (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + "," + std::to_string(l + 1) +
                         ") has wrong size");
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const int n = s.block_dims[i][j];
      auto it = s.involution_maps.find({i, j});
      if (n == 0) continue;
      if (it == s.involution_maps.end())
        throw AlgebraError("missing involution map for block (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ")");
      if (it->second.rows() != s.block_dims[j][i] || it->second.cols() != n)
        throw AlgebraError("involution map for block (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") has wrong shape");
    }
  }
}

Eigen::MatrixXd upper_cholesky_or_identity(const Eigen::MatrixXd& m, bool* ok) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    *ok = false;
    return Eigen::MatrixXd::Identity(m.rows(), m.cols());
  }
  *ok = true;
  return llt.matrixU();
}

}  // namespace

// ---------------------------------------------------------------------------
// TAlgebra

std::shared_ptr<const TAlgebra> TAlgebra::create(TAlgebraSpec spec) {
  validate_structure(spec);
  return std::shared_ptr<const TAlgebra>(new TAlgebra(std::move(spec)));
}

TAlgebra::TAlgebra(TAlgebraSpec spec) : spec_(std::move(spec)) {
  const int r = spec_.rank;
  offsets_.assign(static_cast<std::size_t>(r) * r, 0);
  int pos = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      offsets_[i * r + j] = pos;
      for (int k = 0; k < spec_.block_dims[i][j]; ++k) owner_.push_back({i, j});
      pos += spec_.block_dims[i][j];
    }
  }
  dim_ = pos;

  for (const auto& [key, tensor] : spec_.structure_constants) {
    const auto [i, j, l] = key;
    const int nij = block_dim(i, j), njl = block_dim(j, l), nil = block_dim(i, l);
    for (int p = 0; p < nij; ++p)
      for (int q = 0; q < njl; ++q)
        for (int s = 0; s < nil; ++s) {
          const double v = tensor[(static_cast<std::size_t>(p) * njl + q) * nil + s];
          if (v != 0.0)
            products_.push_back({offset(i, j) + p, offset(j, l) + q, offset(i, l) + s, v});
        }
  }

  for (const auto& [key, map] : spec_.involution_maps) {
    const auto [i, j] = key;
    for (int c = 0; c < map.cols(); ++c)
      for (int row = 0; row < map.rows(); ++row)
        if (map(row, c) != 0.0) stars_.push_back({offset(i, j) + c, offset(j, i) + row, map(row, c)});
  }

  // Gram matrix of Tr(a* b): star(E_p) E_q summed into diagonal blocks.
  gram_ = Eigen::MatrixXd::Zero(dim_, dim_);
  std::vector<std::vector<const ProductTerm*>> by_left(dim_);
  for (const auto& t : products_) by_left[t.left].push_back(&t);
  for (const auto& s : stars_) {
    for (const ProductTerm* t : by_left[s.to]) {
      const auto [bi, bj] = owner_[t->out];
      if (bi != bj) continue;
      gram_(s.from, t->right) += s.value * t->value * spec_.rho[bi];
    }
  }
  bool ok = false;
  gram_sqrt_ = upper_cholesky_or_identity(gram_, &ok);
  gram_identity_ = gram_.isApprox(Eigen::MatrixXd::Identity(dim_, dim_), 0.0) ||
                   (gram_ - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() == 0.0;
  if (dim_ == 0) gram_identity_ = true;

  for (int j = 0; j < r; ++j)
    for (int i = 0; i <= j; ++i)
      for (int k = 0; k < block_dim(i, j); ++k) upper_.push_back(offset(i, j) + k);

  const int h = hermitian_dim();
  embed_ = Eigen::MatrixXd::Zero(dim_, h);
  for (int c = 0; c < h; ++c) {
    const int k = upper_[c];
    embed_(k, c) = 1.0;
    const auto [bi, bj] = owner_[k];
    if (bi == bj) continue;
    for (const auto& s : stars_)
      if (s.from == k) embed_(s.to, c) += s.value;
  }
  metric_ = embed_.transpose() * gram_ * embed_;
  metric_sqrt_ = upper_cholesky_or_identity(metric_, &ok);

  diagonal_ = true;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (i != j && block_dim(i, j) > 0) diagonal_ = false;
}

std::string TAlgebra::coordinate_label(int k) const {
  const auto [i, j] = owner_[k];
  std::ostringstream os;
  os << "A" << i + 1 << j + 1 << "[" << k - offset(i, j) << "]";
  return os.str();
}

std::array<int, 2> TAlgebra::block_of(int k) const { return owner_[k]; }

bool TAlgebra::same_as(const TAlgebra& other) const {
  if (this == &other) return true;
  return spec_.name == other.spec_.name && spec_.rank == other.spec_.rank &&
         spec_.block_dims == other.spec_.block_dims &&
         spec_.structure_constants == other.spec_.structure_constants &&
         spec_.rho == other.spec_.rho;
}

// ---------------------------------------------------------------------------
// Element

Element::Element(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
  if (!algebra_) throw AlgebraError("element requires an algebra");
  coeffs_ = Eigen::VectorXd::Zero(algebra_->dim());
}

Element::Element(AlgebraPtr algebra, Eigen::VectorXd coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw AlgebraError("element requires an algebra");
  if (coeffs_.size() != algebra_->dim())
    throw AlgebraError("coefficient vector has length " + std::to_string(coeffs_.size()) +
                       ", algebra '" + algebra_->name() + "' needs " +
                       std::to_string(algebra_->dim()));
}

Eigen::Map<const Eigen::VectorXd> Element::block(int i, int j) const {
  return {coeffs_.data() + algebra_->offset(i, j), algebra_->block_dim(i, j)};
}

Eigen::Map<Eigen::VectorXd> Element::block(int i, int j) {
  return {coeffs_.data() + algebra_->offset(i, j), algebra_->block_dim(i, j)};
}

double Element::diagonal_value(int i) const {
  return algebra_->rho(i) * coeffs_[algebra_->offset(i, i)];
}

void Element::set_diagonal_value(int i, double value) {
  coeffs_[algebra_->offset(i, i)] = value / algebra_->rho(i);
}

Element& Element::operator+=(const Element& other) {
  require_same_algebra(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_algebra(*this, other);
  coeffs_ -= other.coeffs_;
  return *this;
}

Element& Element::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

Element operator+(Element a, const Element& b) { return a += b; }
Element operator-(Element a, const Element& b) { return a -= b; }
Element operator-(Element a) { return a *= -1.0; }
Element operator*(double s, Element a) { return a *= s; }
Element operator*(Element a, double s) { return a *= s; }

void require_same_algebra(const Element& a, const Element& b) {
  if (a.algebra_ptr() == b.algebra_ptr()) return;
  if (!a.algebra().same_as(b.algebra()))
    throw AlgebraError("algebra mismatch: '" + a.algebra().name() + "' vs '" +
                       b.algebra().name() + "'");
}

Element mul(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Element out(a.algebra_ptr());
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  auto& z = out.coeffs();
  for (const auto& t : a.algebra().product_terms()) z[t.out] += t.value * x[t.left] * y[t.right];
  return out;
}

Element star(const Element& a) {
  Element out(a.algebra_ptr());
  for (const auto& s : a.algebra().star_terms()) out.coeffs()[s.to] += s.value * a.coeffs()[s.from];
  return out;
}

double trace(const Element& a) {
  double t = 0.0;
  for (int i = 0; i < a.algebra().rank(); ++i) t += a.diagonal_value(i);
  return t;
}

double inner(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  const auto& alg = a.algebra();
  if (alg.gram_is_identity()) return a.coeffs().dot(b.coeffs());
  return a.coeffs().dot(alg.gram() * b.coeffs());
}

double norm(const Element& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

Element unit(const AlgebraPtr& algebra) {
  Element e(algebra);
  for (int i = 0; i < algebra->rank(); ++i) e.set_diagonal_value(i, 1.0);
  return e;
}

Element unit(const AlgebraPtr& algebra, int i) {
  Element e(algebra);
  e.set_diagonal_value(i, 1.0);
  return e;
}

Element from_hermitian(const AlgebraPtr& algebra, const Eigen::VectorXd& coords) {
  if (coords.size() != algebra->hermitian_dim())
    throw AlgebraError("Hermitian coordinate vector has length " + std::to_string(coords.size()) +
                       ", algebra '" + algebra->name() + "' needs " +
                       std::to_string(algebra->hermitian_dim()));
  return Element(algebra, algebra->hermitian_embedding() * coords);
}

Eigen::VectorXd to_hermitian(const Element& a) {
  const auto& idx = a.algebra().upper_indices();
  Eigen::VectorXd h(idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) h[c] = a.coeffs()[idx[c]];
  return h;
}

Element upper_part(const Element& a) {
  Element out(a.algebra_ptr());
  for (int k : a.algebra().upper_indices()) out.coeffs()[k] = a.coeffs()[k];
  return out;
}

bool is_hermitian(const Element& a, double tol) {
  const Eigen::VectorXd d = a.coeffs() - star(a).coeffs();
  if (d.size() == 0) return true;
  return d.cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.coeffs().cwiseAbs().maxCoeff());
}

bool is_upper_triangular(const Element& a, double tol) {
  const auto& alg = a.algebra();
  for (int i = 0; i < alg.rank(); ++i)
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < alg.block_dim(i, j); ++k)
        if (std::abs(a.coeffs()[alg.offset(i, j) + k]) > tol) return false;
  return true;
}

Eigen::MatrixXd as_scalar_matrix(const Element& a) {
  const auto& alg = a.algebra();
  const int r = alg.rank();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (alg.block_dim(i, j) > 1)
        throw AlgebraError("as_scalar_matrix needs blocks of dimension <= 1");
      if (alg.block_dim(i, j) == 1) m(i, j) = a.coeffs()[alg.offset(i, j)];
    }
  return m;
}

Element from_scalar_matrix(const AlgebraPtr& algebra, const Eigen::MatrixXd& m) {
  const int r = algebra->rank();
  if (m.rows() != r || m.cols() != r) throw AlgebraError("matrix shape does not match rank");
  Element a(algebra);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const int n = algebra->block_dim(i, j);
      if (n > 1) throw AlgebraError("from_scalar_matrix needs blocks of dimension <= 1");
      if (n == 1) a.coeffs()[algebra->offset(i, j)] = m(i, j);
    }
  return a;
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

struct Checker {
  double tol;

  bool eq(double a, double b) const {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
  }
  bool eq(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    for (Eigen::Index k = 0; k < a.size(); ++k)
      if (!eq(a[k], b[k])) return false;
    return true;
  }
};

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void fail(AxiomCheck& c, std::string witness, std::vector<double> lhs, std::vector<double> rhs) {
  if (!c.passed) return;
  c.passed = false;
  c.witness = std::move(witness);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
}

Element basis(const AlgebraPtr& alg, int k) {
  Element e(alg);
  e.coeffs()[k] = 1.0;
  return e;
}

std::vector<int> block_range(const TAlgebra& alg, int i, int j) {
  std::vector<int> out;
  for (int k = 0; k < alg.block_dim(i, j); ++k) out.push_back(alg.offset(i, j) + k);
  return out;
}

}  // namespace

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::get(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no axiom check named " + name);
}

AxiomReport verify_axioms(const TAlgebraSpec& spec, double tol) {
  const AlgebraPtr alg = TAlgebra::create(spec);
  const Checker ck{tol};
  const int r = alg->rank();
  const int n = alg->dim();
  std::vector<Element> E;
  E.reserve(n);
  for (int k = 0; k < n; ++k) E.push_back(basis(alg, k));
  auto label = [&](int k) { return alg->coordinate_label(k); };

  AxiomReport report;
  report.algebra = alg->name();

  // I: A_ii is a copy of the reals with b_i b_i = rho_i b_i.
  AxiomCheck ax1{"I"};
  for (int i = 0; i < r; ++i) {
    const int k = alg->offset(i, i);
    const Element sq = mul(E[k], E[k]);
    const Eigen::VectorXd expect = alg->rho(i) * E[k].coeffs();
    ++ax1.tuples_checked;
    if (!ck.eq(sq.coeffs(), expect)) fail(ax1, "a=" + label(k), to_std(sq.coeffs()), to_std(expect));
  }
  report.checks.push_back(ax1);

  // II: a_ji e_i = a_ji and e_i a_ij = a_ij.
  AxiomCheck ax2{"II"};
  for (int i = 0; i < r; ++i) {
    const Element ei = unit(alg, i);
    for (int j = 0; j < r; ++j) {
      for (int k : block_range(*alg, j, i)) {
        const Element p = mul(E[k], ei);
        ++ax2.tuples_checked;
        if (!ck.eq(p.coeffs(), E[k].coeffs()))
          fail(ax2, "a=" + label(k) + " * e" + std::to_string(i + 1), to_std(p.coeffs()),
               to_std(E[k].coeffs()));
      }
      for (int k : block_range(*alg, i, j)) {
        const Element p = mul(ei, E[k]);
        ++ax2.tuples_checked;
        if (!ck.eq(p.coeffs(), E[k].coeffs()))
          fail(ax2, "e" + std::to_string(i + 1) + " * a=" + label(k), to_std(p.coeffs()),
               to_std(E[k].coeffs()));
      }
    }
  }
  report.checks.push_back(ax2);

  // Involution (i)-(iv).
  AxiomCheck inv1{"involution(i)"}, inv2{"involution(ii)"}, inv3{"involution(iii)"},
      inv4{"involution(iv)"};
  for (int k = 0; k < n; ++k) {
    const Element s = star(E[k]);
    const Element ss = star(s);
    ++inv1.tuples_checked;
    if (!ck.eq(ss.coeffs(), E[k].coeffs()))
      fail(inv1, "a=" + label(k), to_std(ss.coeffs()), to_std(E[k].coeffs()));
    const auto [bi, bj] = alg->block_of(k);
    ++inv3.tuples_checked;
    for (int m = 0; m < n; ++m) {
      if (s.coeffs()[m] == 0.0) continue;
      const auto [ci, cj] = alg->block_of(m);
      if (ci != bj || cj != bi)
        fail(inv3, "a=" + label(k) + " maps into " + label(m), to_std(s.coeffs()), {});
    }
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (alg->block_dim(i, j) == 0) continue;
      ++inv4.tuples_checked;
      const Eigen::MatrixXd& m = spec.involution_maps.at({i, j});
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (m.rows() != m.cols() || lu.rank() != m.cols())
        fail(inv4, "block A" + std::to_string(i + 1) + std::to_string(j + 1) + " not onto A" +
                       std::to_string(j + 1) + std::to_string(i + 1),
             {}, {});
    }
  for (int a = 0; a < n; ++a) {
    const Element sa = star(E[a]);
    for (int b = 0; b < n; ++b) {
      const Element lhs = star(mul(E[a], E[b]));
      const Element rhs = mul(star(E[b]), sa);
      ++inv2.tuples_checked;
      if (!ck.eq(lhs.coeffs(), rhs.coeffs()))
        fail(inv2, "a=" + label(a) + ", b=" + label(b), to_std(lhs.coeffs()), to_std(rhs.coeffs()));
    }
  }

  // III: Tr(ab) = Tr(ba).
  AxiomCheck ax3{"III"};
  std::vector<std::vector<Element>> prod;
  prod.reserve(n);
  for (int a = 0; a < n; ++a) {
    prod.emplace_back();
    prod.back().reserve(n);
    for (int b = 0; b < n; ++b) prod.back().push_back(mul(E[a], E[b]));
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double lhs = trace(prod[a][b]);
      const double rhs = trace(prod[b][a]);
      ++ax3.tuples_checked;
      if (!ck.eq(lhs, rhs)) fail(ax3, "a=" + label(a) + ", b=" + label(b), {lhs}, {rhs});
    }
  report.checks.push_back(ax3);

  // IV: Tr((ab)c) = Tr(a(bc)).
  AxiomCheck ax4{"IV"};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double lhs = trace(mul(prod[a][b], E[c]));
        const double rhs = trace(mul(E[a], prod[b][c]));
        ++ax4.tuples_checked;
        if (!ck.eq(lhs, rhs))
          fail(ax4, "a=" + label(a) + ", b=" + label(b) + ", c=" + label(c), {lhs}, {rhs});
      }
  report.checks.push_back(ax4);

  // V: Tr(a* a) positive definite.
  AxiomCheck ax5{"V"};
  {
    const Eigen::MatrixXd& g = alg->gram();
    ax5.tuples_checked = n;
    for (int k = 0; k < n && ax5.passed; ++k)
      if (!(g(k, k) > tol)) fail(ax5, "a=" + label(k) + " has <a,a> = " + std::to_string(g(k, k)),
                                 {g(k, k)}, {0.0});
    if (ax5.passed && n > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
      const double lmin = es.eigenvalues()[0];
      const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      if (!(lmin > 1e-12 * scale)) fail(ax5, "Gram eigenvector", to_std(es.eigenvectors().col(0)), {lmin});
    }
  }
  report.checks.push_back(ax5);

  // VI: a_ij (b_jk c_kl) = (a_ij b_jk) c_kl for i <= j <= k <= l.
  AxiomCheck ax6{"VI"};
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      for (int k = j; k < r; ++k)
        for (int l = k; l < r; ++l)
          for (int a : block_range(*alg, i, j))
            for (int b : block_range(*alg, j, k))
              for (int c : block_range(*alg, k, l)) {
                const Element lhs = mul(E[a], prod[b][c]);
                const Element rhs = mul(prod[a][b], E[c]);
                ++ax6.tuples_checked;
                if (!ck.eq(lhs.coeffs(), rhs.coeffs()))
                  fail(ax6, "a=" + label(a) + ", b=" + label(b) + ", c=" + label(c),
                       to_std(lhs.coeffs()), to_std(rhs.coeffs()));
              }
  report.checks.push_back(ax6);

  // VII: a_ij (b_jk b*_lk) = (a_ij b_jk) b*_lk for i <= j <= k, l <= k.
  // Quadratic in b when l == j; checked through its symmetric polarization.
  AxiomCheck ax7{"VII"};
  auto defect = [&](int a, int b, int c) {
    const Element cs = star(E[c]);
    return (mul(E[a], mul(E[b], cs)) - mul(prod[a][b], cs)).coeffs();
  };
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      for (int k = j; k < r; ++k)
        for (int l = 0; l <= k; ++l)
          for (int a : block_range(*alg, i, j)) {
            const auto bs = block_range(*alg, j, k);
            const auto cs = block_range(*alg, l, k);
            for (std::size_t p = 0; p < bs.size(); ++p)
              for (std::size_t q = 0; q < cs.size(); ++q) {
                Eigen::VectorXd d;
                if (l == j) {
                  if (q < p) continue;
                  d = defect(a, bs[p], cs[q]) + defect(a, cs[q], bs[p]);
                } else {
                  d = defect(a, bs[p], cs[q]);
                }
                ++ax7.tuples_checked;
                if (!ck.eq(d, Eigen::VectorXd::Zero(d.size())))
                  fail(ax7, "a=" + label(a) + ", b=" + label(bs[p]) + ", b'=" + label(cs[q]),
                       to_std(d), to_std(Eigen::VectorXd::Zero(d.size())));
              }
          }
  report.checks.push_back(ax7);

  report.checks.push_back(inv1);
  report.checks.push_back(inv2);
  report.checks.push_back(inv3);
  report.checks.push_back(inv4);
  return report;
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

TAlgebraSpec matrix_pattern_spec(std::string name, const std::vector<std::vector<int>>& dims) {
  TAlgebraSpec s;
  s.name = std::move(name);
  s.rank = static_cast<int>(dims.size());
  s.block_dims = dims;
  s.rho.assign(s.rank, 1.0);
  for (int i = 0; i < s.rank; ++i)
    for (int j = 0; j < s.rank; ++j) {
      if (dims[i][j] == 0) continue;
      s.involution_maps[{i, j}] = Eigen::MatrixXd::Ones(1, 1);
      for (int l = 0; l < s.rank; ++l)
        if (dims[j][l] == 1 && dims[i][l] == 1) s.structure_constants[{i, j, l}] = {1.0};
    }
  return s;
}

}  // namespace

TAlgebraSpec orthant_spec(int n) {
  if (n < 1) throw AlgebraError("orthant(n) needs n >= 1");
  std::vector<std::vector<int>> dims(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) dims[i][i] = 1;
  return matrix_pattern_spec("orthant(" + std::to_string(n) + ")", dims);
}

TAlgebraSpec psd_spec(int n) {
  if (n < 1) throw AlgebraError("psd(n) needs n >= 1");
  return matrix_pattern_spec("psd(" + std::to_string(n) + ")",
                             std::vector<std::vector<int>>(n, std::vector<int>(n, 1)));
}

TAlgebraSpec vinberg5_spec() {
  return matrix_pattern_spec("vinberg5", {{1, 1, 1}, {1, 1, 0}, {1, 0, 1}});
}

TAlgebraSpec builtin_spec(const std::string& raw) {
  std::string name = raw;
  if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
  if (name == "vinberg5") return vinberg5_spec();
  static const std::regex sized(R"((orthant|psd)\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, sized)) {
    const int n = std::stoi(m[2].str());
    return m[1] == "orthant" ? orthant_spec(n) : psd_spec(n);
  }
  throw AlgebraError("unknown built-in algebra '" + raw + "'");
}

AlgebraPtr builtin(const std::string& name) { return TAlgebra::create(builtin_spec(name)); }

}  // namespace hcone
