#include "bcreg/special.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bcreg/error.hpp"

namespace bcreg {

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "log_gamma requires x > 0");
  return boost::math::lgamma(x);
}

double regularized_incomplete_beta(double a, double b, double x) {
  return boost::math::ibeta(a, b, x);
}

}  // namespace bcreg
