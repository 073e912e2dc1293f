#include "bcreg/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "bcreg/error.hpp"

namespace bcreg {

namespace {
constexpr double kBracketScales = 50.0;
constexpr double kRelTolerance = 1e-9;
}  // namespace

StudentTMixture::StudentTMixture(std::vector<double> weights, std::vector<StudentT> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (weights_.empty() || weights_.size() != components_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "mixture needs one weight per component");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "mixture weights sum to " + std::to_string(total));
  }
  lo_bracket_ = std::numeric_limits<double>::infinity();
  hi_bracket_ = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    if (!(c.scale2 > 0.0) || !(c.dof > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "Student-t components need positive scale and dof");
    }
    max_scale_ = std::max(max_scale_, c.scale());
  }
  for (const auto& c : components_) {
    lo_bracket_ = std::min(lo_bracket_, c.loc - kBracketScales * max_scale_);
    hi_bracket_ = std::max(hi_bracket_, c.loc + kBracketScales * max_scale_);
  }
}

double StudentTMixture::mean() const {
  double acc = 0.0;
  for (std::size_t l = 0; l < components_.size(); ++l) acc += weights_[l] * components_[l].loc;
  return acc;
}

double StudentTMixture::cdf(double x) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < components_.size(); ++l) {
    if (weights_[l] == 0.0) continue;
    acc += weights_[l] * student_t_cdf(components_[l], x);
  }
  return acc;
}

double StudentTMixture::log_pdf(double x) const {
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(components_.size());
  for (std::size_t l = 0; l < components_.size(); ++l) {
    terms[l] = std::log(weights_[l]) + student_t_log_pdf(components_[l], x);
    max_term = std::max(max_term, terms[l]);
  }
  if (!std::isfinite(max_term)) return max_term;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

double StudentTMixture::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "quantile probability must lie in (0, 1)");
  }
  double lo = lo_bracket_;
  double hi = hi_bracket_;
  if (!(cdf(lo) <= prob && cdf(hi) >= prob)) {
    throw Error(ErrorCode::BracketFailure, "mixture quantile " + std::to_string(prob) +
                                               " not bracketed by [" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + "]");
  }
  const double tol = kRelTolerance * (1.0 + max_scale_);
  // TOMS 748 bracketing: same stopping rule as bisection, far fewer CDF calls.
  const auto f = [&](double x) { return cdf(x) - prob; };
  const auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, done, max_iter);
  return 0.5 * (a + b);
}

Interval StudentTMixture::equal_tailed_interval(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "interval level must lie in (0, 1)");
  }
  return Interval{quantile(0.5 * (1.0 - level)), quantile(0.5 * (1.0 + level))};
}

}  // namespace bcreg
