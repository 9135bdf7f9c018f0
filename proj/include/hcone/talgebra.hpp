#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcone {

/// Raised when two elements from different algebras are combined, or when a
/// spec is structurally malformed.
class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data form of a matrix algebra with involution.
///
/// Block indices are 0-based in code (files and printed output use 1-based).
/// A missing structure-constant triple means the product A_ij x A_jl -> A_il
/// is identically zero. Tensors are stored row-major as [p][q][s] with
/// p < n_ij, q < n_jl, s < n_il. Involution maps (i,j) send A_ij to A_ji and
/// are stored as n_ji x n_ij matrices.
struct TAlgebraSpec {
  std::string name;
  int rank = 0;
  std::vector<std::vector<int>> block_dims;
  std::map<std::array<int, 3>, std::vector<double>> structure_constants;
  std::map<std::array<int, 2>, Eigen::MatrixXd> involution_maps;
  // rho[i] is the value of rho_i on the basis vector of A_ii; it must equal
  // the structure constant of that basis vector squared.
  std::vector<double> rho;
};

/// Validated, immutable algebra with precomputed product and involution tables.
///
/// Elements live in the ambient space A = (+) A_ij, stored as one coefficient
/// vector with blocks laid out row-major over (i, j). The Hermitian subspace H
/// is parametrized by the upper blocks i <= j in column-major order, which for
/// the Vinberg cone reproduces the (x1, ..., x5) coordinates.
class TAlgebra {
 public:
  struct ProductTerm {
    int left;
    int right;
    int out;
    double value;
  };
  struct StarTerm {
    int from;
    int to;
    double value;
  };

  static std::shared_ptr<const TAlgebra> create(TAlgebraSpec spec);

  const TAlgebraSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  int rank() const { return spec_.rank; }
  int block_dim(int i, int j) const { return spec_.block_dims[i][j]; }
  int offset(int i, int j) const { return offsets_[i * spec_.rank + j]; }
  int dim() const { return dim_; }
  double rho(int i) const { return spec_.rho[i]; }

  const std::vector<ProductTerm>& product_terms() const { return products_; }
  const std::vector<StarTerm>& star_terms() const { return stars_; }

  /// Gram matrix of the trace form <a,b> = Tr(a* b) on ambient coordinates.
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Upper factor R with gram = R^T R; ||a|| = |R a|.
  const Eigen::MatrixXd& gram_sqrt() const { return gram_sqrt_; }
  bool gram_is_identity() const { return gram_identity_; }

  /// Ambient indices of the upper-triangular subalgebra T (blocks i <= j),
  /// ordered like the Hermitian coordinates.
  const std::vector<int>& upper_indices() const { return upper_; }
  int hermitian_dim() const { return static_cast<int>(upper_.size()); }
  /// Ambient embedding of Hermitian coordinates: a = embed * h.
  const Eigen::MatrixXd& hermitian_embedding() const { return embed_; }
  /// Metric of the trace form in Hermitian coordinates.
  const Eigen::MatrixXd& hermitian_metric() const { return metric_; }
  /// Upper factor of the metric: metric = R^T R.
  const Eigen::MatrixXd& hermitian_metric_sqrt() const { return metric_sqrt_; }

  /// True when every off-diagonal block is zero-dimensional.
  bool is_diagonal() const { return diagonal_; }

  /// Human-readable label of ambient coordinate k, e.g. "A13[0]" (1-based blocks).
  std::string coordinate_label(int k) const;
  /// Block (i, j) owning ambient coordinate k.
  std::array<int, 2> block_of(int k) const;

  bool same_as(const TAlgebra& other) const;

 private:
  explicit TAlgebra(TAlgebraSpec spec);

  TAlgebraSpec spec_;
  std::vector<int> offsets_;
  std::vector<std::array<int, 2>> owner_;
  int dim_ = 0;
  std::vector<ProductTerm> products_;
  std::vector<StarTerm> stars_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd gram_sqrt_;
  bool gram_identity_ = false;
  std::vector<int> upper_;
  Eigen::MatrixXd embed_;
  Eigen::MatrixXd metric_;
  Eigen::MatrixXd metric_sqrt_;
  bool diagonal_ = false;
};

using AlgebraPtr = std::shared_ptr<const TAlgebra>;

/// A generalized matrix: one coefficient vector per block A_ij.
class Element {
 public:
  explicit Element(AlgebraPtr algebra);
  Element(AlgebraPtr algebra, Eigen::VectorXd coeffs);

  const TAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  Eigen::Map<const Eigen::VectorXd> block(int i, int j) const;
  Eigen::Map<Eigen::VectorXd> block(int i, int j);

  /// rho_i(a_ii), i.e. the real number represented by the diagonal block.
  double diagonal_value(int i) const;
  void set_diagonal_value(int i, double value);

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(double s);

 private:
  AlgebraPtr algebra_;
  Eigen::VectorXd coeffs_;
};

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator-(Element a);
Element operator*(double s, Element a);
Element operator*(Element a, double s);

/// Throws AlgebraError unless a and b share an algebra.
void require_same_algebra(const Element& a, const Element& b);

Element mul(const Element& a, const Element& b);
Element star(const Element& a);
double trace(const Element& a);
/// Trace form <a,b> = Tr(a* b).
double inner(const Element& a, const Element& b);
double norm(const Element& a);

/// e = sum_i e_i.
Element unit(const AlgebraPtr& algebra);
/// e_i, the unit of A_ii.
Element unit(const AlgebraPtr& algebra, int i);

Element from_hermitian(const AlgebraPtr& algebra, const Eigen::VectorXd& coords);
/// Reads the upper blocks; meaningful for Hermitian input.
Eigen::VectorXd to_hermitian(const Element& a);
/// Keeps blocks i <= j and zeroes the rest.
Element upper_part(const Element& a);
bool is_hermitian(const Element& a, double tol = 0.0);
bool is_upper_triangular(const Element& a, double tol = 0.0);

/// Dense view as a rank x rank matrix; only meaningful when every block has
/// dimension <= 1 (orthant, psd, vinberg5). Zero-dimensional blocks read 0.
Eigen::MatrixXd as_scalar_matrix(const Element& a);
Element from_scalar_matrix(const AlgebraPtr& algebra, const Eigen::MatrixXd& m);

// ---------------------------------------------------------------------------
// Axiom verification

struct AxiomCheck {
  std::string name;
  bool passed = true;
  long tuples_checked = 0;
  std::string witness;
  std::vector<double> lhs;
  std::vector<double> rhs;
};

struct AxiomReport {
  std::string algebra;
  std::vector<AxiomCheck> checks;

  bool all_passed() const;
  const AxiomCheck& get(const std::string& name) const;
};

/// Checks Axioms I-VII and involution properties (i)-(iv) on all basis tuples.
/// tol = 0 means exact equality; built-in constants are integers so the
/// built-ins are checked exactly.
AxiomReport verify_axioms(const TAlgebraSpec& spec, double tol = 0.0);

// ---------------------------------------------------------------------------
// Built-ins

TAlgebraSpec orthant_spec(int n);
TAlgebraSpec psd_spec(int n);
TAlgebraSpec vinberg5_spec();

/// Accepts "orthant(n)", "psd(n)", "vinberg5", optionally prefixed "builtin:".
TAlgebraSpec builtin_spec(const std::string& name);
AlgebraPtr builtin(const std::string& name);

}  // namespace hcone
