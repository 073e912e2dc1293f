#pragma once
// Independent reference computations used only by tests. Nothing here calls
// into the factorization paths of the library.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& eng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = nd(eng);
  return M;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& eng, Eigen::Index n) {
  return random_matrix(eng, n, 1).col(0);
}

/// Gauss-Jordan inverse with partial pivoting, written out by hand.
inline Eigen::MatrixXd naive_inverse(Eigen::MatrixXd A) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
    A.row(c).swap(A.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = A(c, c);
    for (Eigen::Index k = 0; k < n; ++k) {
      A(c, k) /= d;
      inv(c, k) /= d;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A(r, c);
      for (Eigen::Index k = 0; k < n; ++k) {
        A(r, k) -= f * A(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

/// log|det A| by Gaussian elimination with partial pivoting.
inline double naive_log_abs_det(Eigen::MatrixXd A) {
  const Eigen::Index n = A.rows();
  double acc = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
    A.row(c).swap(A.row(piv));
    acc += std::log(std::abs(A(c, c)));
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double f = A(r, c) / A(c, c);
      for (Eigen::Index k = c; k < n; ++k) A(r, k) -= f * A(c, k);
    }
  }
  return acc;
}

/// Closed-form marginal likelihood evaluated directly in n-space:
/// M = Z Sigma_beta Z' + I, log P = -1/2 log|M| + (n/2) log 2 + lgamma(n/2)
///   - (n/2) log(y' M^{-1} y) - (n/2) log(2 pi).
inline double n_space_log_marginal(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& sigma_beta) {
  const Eigen::Index n = Z.rows();
  const Eigen::MatrixXd M = Z * sigma_beta.asDiagonal() * Z.transpose() + Eigen::MatrixXd::Identity(n, n);
  const double quad = y.dot(naive_inverse(M) * y);
  const double half_n = 0.5 * static_cast<double>(n);
  return -0.5 * naive_log_abs_det(M) + half_n * std::log(2.0) + std::lgamma(half_n) - half_n * std::log(quad) -
         half_n * std::log(2.0 * std::numbers::pi);
}

/// Integral of f over the real line by adaptive Gauss-Kronrod.
template <typename F>
double integrate_real_line(F f) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-13, &err);
}

/// Empirical quantile of a sorted sample (type 7).
inline double sorted_quantile(const std::vector<double>& sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Monte Carlo standard error of the q-quantile from N draws, using the
/// asymptotic sqrt(q(1-q)/N) / f(x_q) with the density supplied by the caller.
inline double quantile_mc_se(double q, std::size_t N, double density_at_quantile) {
  return std::sqrt(q * (1.0 - q) / static_cast<double>(N)) / density_at_quantile;
}

}  // namespace oracle
