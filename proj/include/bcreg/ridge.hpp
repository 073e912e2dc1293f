#pragma once

#include <vector>

#include <Eigen/Core>

namespace bcreg {

/// {10^k : k = -4, -3.5, ..., 4}.
std::vector<double> default_lambda_grid();

struct RidgeResult {
  double lambda = 0.0;
  double residual_variance = 0.0;
  std::vector<double> loo_errors;  ///< mean squared LOO error per grid value
  Eigen::VectorXd coef;
  Eigen::VectorXd pred;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Closed-form ridge (no intercept; inputs are centered) with lambda chosen
/// from `grid` by exact leave-one-out error through the hat-matrix
/// shortcut. Works in the n x n dual form so p >> n is cheap. Intervals are
/// normal plug-in: pred +/- z_{(1+level)/2} sqrt(RSS / n).
RidgeResult ridge_fit_predict(const Eigen::Ref<const Eigen::MatrixXd>& X_train,
                              const Eigen::Ref<const Eigen::VectorXd>& y_train,
                              const Eigen::Ref<const Eigen::MatrixXd>& X_test,
                              const std::vector<double>& lambda_grid, double level = 0.95);

}  // namespace bcreg
