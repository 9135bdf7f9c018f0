#pragma once

// Independent reference computations used by the tests and the acceptance run.
// None of these call into the cone or solver code.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Frobenius projection onto the PSD cone by eigenvalue clipping.
inline Eigen::MatrixXd psd_clip(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd principal(const Eigen::MatrixXd& m, unsigned mask) {
  std::vector<int> idx;
  for (int i = 0; i < m.rows(); ++i)
    if (mask & (1u << i)) idx.push_back(i);
  Eigen::MatrixXd s(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = m(idx[a], idx[b]);
  return s;
}

/// All 2^n - 1 principal minors positive.
inline bool is_P_matrix(const Eigen::MatrixXd& m) {
  const unsigned n = static_cast<unsigned>(m.rows());
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    if (!(principal(m, mask).determinant() > 0.0)) return false;
  return true;
}

/// Solutions of x >= 0, Mx + q >= 0, x'(Mx + q) = 0 found by solving
/// M_SS x_S = -q_S over every index set S.
inline std::vector<Eigen::VectorXd> lcp_enumerate(const Eigen::MatrixXd& m, const Eigen::VectorXd& q,
                                                  double tol = 1e-10) {
  const unsigned n = static_cast<unsigned>(m.rows());
  std::vector<Eigen::VectorXd> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (unsigned i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(static_cast<int>(i));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (!s.empty()) {
      const Eigen::MatrixXd mss = principal(m, mask);
      Eigen::VectorXd qs(s.size());
      for (std::size_t a = 0; a < s.size(); ++a) qs[a] = -q[s[a]];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(mss);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd xs = lu.solve(qs);
      for (std::size_t a = 0; a < s.size(); ++a) x[s[a]] = xs[a];
    }
    const Eigen::VectorXd y = m * x + q;
    const double scale = 1.0 + x.norm() + q.norm();
    if (x.minCoeff() >= -tol * scale && y.minCoeff() >= -tol * scale) {
      bool dup = false;
      for (const auto& o : out) dup = dup || (o - x).norm() <= 1e-9 * scale;
      if (!dup) out.push_back(x);
    }
  }
  return out;
}

/// Whether LCP(L, 0) has a nonzero solution d >= 0, Ld >= 0, d'Ld = 0.
/// Every principal submatrix must have nullity <= 1; nullopt otherwise.
inline std::optional<bool> lcp_zero_has_nonzero_solution(const Eigen::MatrixXd& l, double tol = 1e-9) {
  const unsigned n = static_cast<unsigned>(l.rows());
  bool found = false;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const Eigen::MatrixXd lss = principal(l, mask);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lss);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd ker = lu.kernel();
    if (lu.isInvertible()) continue;
    if (ker.cols() > 1) return std::nullopt;
    for (double sign : {1.0, -1.0}) {
      const Eigen::VectorXd ds = sign * ker.col(0).normalized();
      if (ds.minCoeff() < -tol) continue;
      Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
      int a = 0;
      for (unsigned i = 0; i < n; ++i)
        if (mask & (1u << i)) d[i] = ds[a++];
      if ((l * d).minCoeff() >= -tol) found = true;
    }
  }
  return found;
}

/// Integer matrix with entries in [-2, 2].
inline Eigen::MatrixXd small_integer_matrix(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-2, 2);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace oracle
