#include "bcreg/ridge.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include "bcreg/error.hpp"

namespace bcreg {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = -8; k <= 8; ++k) grid.push_back(std::pow(10.0, 0.5 * k));
  return grid;
}

RidgeResult ridge_fit_predict(const Eigen::Ref<const Eigen::MatrixXd>& X_train,
                              const Eigen::Ref<const Eigen::VectorXd>& y_train,
                              const Eigen::Ref<const Eigen::MatrixXd>& X_test, const std::vector<double>& lambda_grid,
                              double level) {
  const Eigen::Index n = X_train.rows();
  if (y_train.size() != n || X_test.cols() != X_train.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "ridge inputs have inconsistent shapes");
  }
  if (lambda_grid.empty()) throw Error(ErrorCode::InvalidArgument, "lambda grid is empty");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");

  // Eigendecomposition of the smaller Gram matrix. With p >= n the dual
  // K = X X' = U diag(d) U' gives H = U diag(d / (d + lambda)) U'. With
  // p < n the primal X'X = V diag(d) V' gives H = W diag(1 / (d + lambda)) W'
  // for W = X V, which stays accurate as lambda -> 0.
  const Eigen::Index p = X_train.cols();
  const bool dual = p >= n;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dual ? n : p, dual ? n : p);
  if (dual) {
    G.selfadjointView<Eigen::Lower>().rankUpdate(X_train);
  } else {
    G.selfadjointView<Eigen::Lower>().rankUpdate(X_train.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::CholeskyFailure, "eigendecomposition of the Gram matrix failed");
  const Eigen::VectorXd d = eig.eigenvalues().cwiseMax(0.0);
  // Columns of W span the fitted space: H = W diag(g) W'.
  const Eigen::MatrixXd W = dual ? eig.eigenvectors() : Eigen::MatrixXd(X_train * eig.eigenvectors());
  const Eigen::VectorXd Wty = W.transpose() * y_train;
  const Eigen::MatrixXd W2 = W.cwiseAbs2();
  const auto gain = [&](double lambda) -> Eigen::VectorXd {
    if (dual) return d.array() / (d.array() + lambda);
    return (d.array() + lambda).inverse();
  };

  RidgeResult out;
  out.loo_errors.reserve(lambda_grid.size());
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    const Eigen::VectorXd g = gain(lambda);
    const Eigen::VectorXd fitted = W * g.cwiseProduct(Wty);
    const Eigen::VectorXd h = W2 * g;  // diag(H)
    const Eigen::VectorXd loo = (y_train - fitted).array() / (1.0 - h.array());
    const double err = loo.squaredNorm() / static_cast<double>(n);
    out.loo_errors.push_back(err);
    if (err < best) {
      best = err;
      out.lambda = lambda;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::InvalidArgument, "no grid value gives a finite LOO error");

  if (dual) {
    const Eigen::VectorXd alpha = W * (Wty.array() / (d.array() + out.lambda)).matrix();
    out.coef = X_train.transpose() * alpha;
  } else {
    out.coef = eig.eigenvectors() * (Wty.array() / (d.array() + out.lambda)).matrix();
  }
  const Eigen::VectorXd fitted = X_train * out.coef;
  out.residual_variance = (y_train - fitted).squaredNorm() / static_cast<double>(n);
  out.pred = X_test * out.coef;
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + level));
  const double half = z * std::sqrt(out.residual_variance);
  out.lo = out.pred.array() - half;
  out.hi = out.pred.array() + half;
  return out;
}

}  // namespace bcreg
