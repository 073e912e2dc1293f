#pragma once

#include <vector>

#include "bcreg/conjugate.hpp"

namespace bcreg {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Finite mixture of location-scale Student-t laws.
class StudentTMixture {
 public:
  /// Weights must be non-negative and sum to one within 1e-12.
  StudentTMixture(std::vector<double> weights, std::vector<StudentT> components);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<StudentT>& components() const noexcept { return components_; }

  /// Weighted average of component locations.
  double mean() const;
  double cdf(double x) const;
  double log_pdf(double x) const;

  /// Bracketing root search (TOMS 748) on the mixture CDF. The bracket is [min loc - 50 s, max loc + 50 s]
  /// with s the largest component scale; stops once the bracket is narrower
  /// than 1e-9 (1 + s). Throws Error(BracketFailure) if prob is not inside
  /// the CDF range of the bracket.
  double quantile(double prob) const;

  /// Equal-tailed interval at the given level in (0, 1).
  Interval equal_tailed_interval(double level) const;

 private:
  std::vector<double> weights_;
  std::vector<StudentT> components_;
  double lo_bracket_ = 0.0;
  double hi_bracket_ = 0.0;
  double max_scale_ = 0.0;
};

}  // namespace bcreg
