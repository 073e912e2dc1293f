#pragma once

namespace bcreg {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace bcreg
