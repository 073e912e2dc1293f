#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace bcreg {

/// Normal prior beta | sigma^2 ~ N(0, sigma^2 diag(sigma_beta_diag)) paired
/// with the Jeffreys scale prior pi(sigma^2) ∝ 1 / sigma^2.
struct PriorSpec {
  Eigen::VectorXd sigma_beta_diag;

  static PriorSpec isotropic(std::size_t m, double variance = 1.0);

  /// Throws Error(InvalidSpec) on non-positive or non-finite entries, or
  /// Error(DimensionMismatch) if the length differs from m.
  void validate(std::size_t m) const;
};

/// Location-scale Student-t. `scale2` is the squared scale, not the variance.
struct StudentT {
  double loc = 0.0;
  double scale2 = 1.0;
  double dof = 1.0;

  double scale() const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double quantile(double prob) const;
};

double student_t_cdf(const StudentT& t, double x);
double student_t_log_pdf(const StudentT& t, double x);
/// Inverse CDF, prob in (0, 1).
double student_t_quantile(const StudentT& t, double prob);

/// Exact normal-inverse-gamma posterior for y = Z beta + eps under the prior
/// above. A = Z^T Z + Sigma_beta^{-1} is kept as its lower Cholesky factor;
/// the marginal posterior of beta is multivariate t with n dof, location mu
/// and scale matrix (2 b1 / n) A^{-1}.
class CompressedPosterior {
 public:
  /// Rebuilds a posterior from stored fields (used by deserialization).
  /// Validates the invariants: positive Cholesky diagonal, b1 > 0, a1 == n/2.
  CompressedPosterior(Eigen::VectorXd mu, Eigen::MatrixXd chol_A, double a1, double b1,
                      std::size_t n, double log_marginal);

  const Eigen::VectorXd& mu() const noexcept { return mu_; }
  const Eigen::MatrixXd& chol_A() const noexcept { return chol_A_; }
  double a1() const noexcept { return a1_; }
  double b1() const noexcept { return b1_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return static_cast<std::size_t>(mu_.size()); }
  double log_marginal() const noexcept { return log_marginal_; }

  /// Scale matrix of beta | y, (2 b1 / n) A^{-1}. Forms an explicit inverse;
  /// meant for inspection, not for the prediction path.
  Eigen::MatrixXd scale_matrix() const;

  /// z^T A^{-1} z through one triangular solve.
  double quadratic_form_inverse(const Eigen::Ref<const Eigen::VectorXd>& z) const;

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd chol_A_;
  double a1_;
  double b1_;
  std::size_t n_;
  double log_marginal_;
};

/// Throws Error(DimensionMismatch), Error(CholeskyFailure) when A is not
/// numerically positive definite (pivot below 1e-12 of the mean diagonal),
/// Error(NonPositiveB1) when b1 <= 1e-12 y^T y.
CompressedPosterior fit_posterior(const Eigen::Ref<const Eigen::MatrixXd>& Z,
                                  const Eigen::Ref<const Eigen::VectorXd>& y,
                                  const PriorSpec& prior);

/// log P(y | Z) under the Jeffreys-scale conjugate prior, evaluated with
/// m x m factorizations only:
///   -1/2 (log|A| + log|Sigma_beta|) + (n/2) log 2 + log Gamma(n/2)
///   - (n/2) log(2 b1) - (n/2) log(2 pi).
double log_marginal(const Eigen::Ref<const Eigen::MatrixXd>& Z,
                    const Eigen::Ref<const Eigen::VectorXd>& y, const PriorSpec& prior);

/// Posterior predictive of y at compressed covariate z_new: t_n with
/// location z^T mu and squared scale (2 b1 / n)(1 + z^T A^{-1} z).
StudentT predictive(const CompressedPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& z_new);

}  // namespace bcreg
