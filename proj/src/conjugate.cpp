#include "bcreg/conjugate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bcreg/error.hpp"
#include "bcreg/special.hpp"

namespace bcreg {

namespace {

constexpr double kCholeskyPivotFloor = 1e-12;
constexpr double kB1Floor = 1e-12;

void check_dims(const Eigen::Ref<const Eigen::MatrixXd>& Z, const Eigen::Ref<const Eigen::VectorXd>& y,
                const PriorSpec& prior) {
  if (Z.rows() < 1 || Z.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "compressed design must be at least 1 x 1");
  }
  if (Z.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "design has " + std::to_string(Z.rows()) +
                                                  " rows but response has " + std::to_string(y.size()));
  }
  prior.validate(static_cast<std::size_t>(Z.cols()));
}

struct Factorization {
  Eigen::MatrixXd L;
  Eigen::VectorXd Zty;
  Eigen::VectorXd mu;
  double yty = 0.0;
  double b1 = 0.0;
};

Factorization factorize(const Eigen::Ref<const Eigen::MatrixXd>& Z, const Eigen::Ref<const Eigen::VectorXd>& y,
                        const PriorSpec& prior) {
  check_dims(Z, y, prior);
  const Eigen::Index m = Z.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  A.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose());
  A.diagonal() += prior.sigma_beta_diag.cwiseInverse();

  const double mean_diag = A.diagonal().mean();
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(A);
  if (llt.info() != Eigen::Success || !std::isfinite(mean_diag)) {
    throw Error(ErrorCode::CholeskyFailure, "A = Z'Z + inv(Sigma_beta) is not positive definite");
  }
  Factorization f;
  f.L = llt.matrixL();
  const double pivot_floor = kCholeskyPivotFloor * mean_diag;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = f.L(i, i);
    if (!(d * d > pivot_floor)) {
      throw Error(ErrorCode::CholeskyFailure, "Cholesky pivot " + std::to_string(i) + " below floor");
    }
  }
  f.Zty.noalias() = Z.transpose() * y;
  f.mu = llt.solve(f.Zty);
  f.yty = y.squaredNorm();
  // ||y - Z mu||^2 + mu' inv(Sigma_beta) mu equals y'y - y'Z inv(A) Z'y but
  // is a sum of non-negative terms.
  const Eigen::VectorXd resid = y - Z * f.mu;
  const double penalty = f.mu.cwiseAbs2().cwiseQuotient(prior.sigma_beta_diag).sum();
  f.b1 = 0.5 * (resid.squaredNorm() + penalty);
  if (!std::isfinite(f.b1) || f.b1 <= kB1Floor * f.yty) {
    throw Error(ErrorCode::NonPositiveB1,
                "b1 = " + std::to_string(f.b1) + " is not positive; y lies in the span of Z");
  }
  return f;
}

double log_marginal_from(const Factorization& f, const PriorSpec& prior, std::size_t n) {
  const double half_n = 0.5 * static_cast<double>(n);
  const double log_det_A = 2.0 * f.L.diagonal().array().log().sum();
  const double log_det_sigma = prior.sigma_beta_diag.array().log().sum();
  return -0.5 * (log_det_A + log_det_sigma) + half_n * std::log(2.0) + log_gamma(half_n) -
         half_n * std::log(2.0 * f.b1) - half_n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

PriorSpec PriorSpec::isotropic(std::size_t m, double variance) {
  return PriorSpec{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), variance)};
}

void PriorSpec::validate(std::size_t m) const {
  if (static_cast<std::size_t>(sigma_beta_diag.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "prior diagonal has length " +
                                                  std::to_string(sigma_beta_diag.size()) + ", expected " +
                                                  std::to_string(m));
  }
  for (Eigen::Index i = 0; i < sigma_beta_diag.size(); ++i) {
    const double v = sigma_beta_diag[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidSpec, "prior variances must be positive and finite");
    }
  }
}

// ---- Student-t --------------------------------------------------------------

double StudentT::scale() const { return std::sqrt(scale2); }

double student_t_cdf(const StudentT& t, double x) {
  const double z = (x - t.loc) / t.scale();
  if (z == 0.0) return 0.5;
  const double z2 = z * z;
  const double nu = t.dof;
  // Lower tail mass P(T < -|z|) = I_{nu/(nu+z^2)}(nu/2, 1/2) / 2.
  double tail;
  if (nu < 2.0 * z2) {
    tail = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + z2));
  } else {
    tail = 0.5 * boost::math::ibetac(0.5, 0.5 * nu, z2 / (nu + z2));
  }
  return z < 0.0 ? tail : 1.0 - tail;
}

double student_t_log_pdf(const StudentT& t, double x) {
  const double nu = t.dof;
  const double z = (x - t.loc) / t.scale();
  // log Gamma((nu+1)/2) - log Gamma(nu/2) without cancellation at large nu.
  const double log_gamma_ratio = -std::log(boost::math::tgamma_delta_ratio(0.5 * nu, 0.5));
  return log_gamma_ratio - 0.5 * std::log(nu * std::numbers::pi * t.scale2) -
         0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double student_t_quantile(const StudentT& t, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "quantile probability must lie in (0, 1)");
  }
  const boost::math::students_t_distribution<double> dist(t.dof);
  return t.loc + t.scale() * boost::math::quantile(dist, prob);
}

double StudentT::log_pdf(double x) const { return student_t_log_pdf(*this, x); }
double StudentT::cdf(double x) const { return student_t_cdf(*this, x); }
double StudentT::quantile(double prob) const { return student_t_quantile(*this, prob); }

// ---- posterior ------------------------------------------------------------

CompressedPosterior::CompressedPosterior(Eigen::VectorXd mu, Eigen::MatrixXd chol_A, double a1, double b1,
                                         std::size_t n, double log_marginal)
    : mu_(std::move(mu)), chol_A_(std::move(chol_A)), a1_(a1), b1_(b1), n_(n), log_marginal_(log_marginal) {
  const Eigen::Index m = mu_.size();
  if (m < 1 || chol_A_.rows() != m || chol_A_.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "posterior factor must be m x m with m = len(mu)");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(chol_A_(i, i) > 0.0)) throw Error(ErrorCode::CholeskyFailure, "Cholesky diagonal must be positive");
  }
  if (!(b1_ > 0.0)) throw Error(ErrorCode::NonPositiveB1, "b1 must be positive");
  if (n_ < 1 || a1_ != 0.5 * static_cast<double>(n_)) {
    throw Error(ErrorCode::InvalidSpec, "a1 must equal n/2");
  }
}

Eigen::MatrixXd CompressedPosterior::scale_matrix() const {
  const Eigen::Index m = mu_.size();
  const auto L = chol_A_.triangularView<Eigen::Lower>();
  Eigen::MatrixXd Linv = L.solve(Eigen::MatrixXd::Identity(m, m));
  return (2.0 * b1_ / static_cast<double>(n_)) * (Linv.transpose() * Linv);
}

double CompressedPosterior::quadratic_form_inverse(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != mu_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "compressed covariate has length " + std::to_string(z.size()) +
                                                  ", posterior has m = " + std::to_string(mu_.size()));
  }
  const Eigen::VectorXd w = chol_A_.triangularView<Eigen::Lower>().solve(z);
  return w.squaredNorm();
}

CompressedPosterior fit_posterior(const Eigen::Ref<const Eigen::MatrixXd>& Z,
                                  const Eigen::Ref<const Eigen::VectorXd>& y, const PriorSpec& prior) {
  Factorization f = factorize(Z, y, prior);
  const auto n = static_cast<std::size_t>(Z.rows());
  const double lm = log_marginal_from(f, prior, n);
  return CompressedPosterior(std::move(f.mu), std::move(f.L), 0.5 * static_cast<double>(n), f.b1, n, lm);
}

double log_marginal(const Eigen::Ref<const Eigen::MatrixXd>& Z, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const PriorSpec& prior) {
  const Factorization f = factorize(Z, y, prior);
  return log_marginal_from(f, prior, static_cast<std::size_t>(Z.rows()));
}

StudentT predictive(const CompressedPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& z_new) {
  const double q = post.quadratic_form_inverse(z_new);
  const double n = static_cast<double>(post.n());
  return StudentT{z_new.dot(post.mu()), (2.0 * post.b1() / n) * (1.0 + q), n};
}

}  // namespace bcreg
