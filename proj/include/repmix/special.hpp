#ifndef REPMIX_SPECIAL_HPP
#define REPMIX_SPECIAL_HPP

#include <cmath>

#include "repmix/common.hpp"

namespace repmix {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

inline double log_normal_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + z * z / var);
}

inline double normal_pdf(double x, double mean, double var) {
  return std::exp(log_normal_pdf(x, mean, var));
}

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * 1.4142135623730950488016887242097));
}

// log density of InvGamma(shape a, scale b) at x > 0
inline double log_inv_gamma_pdf(double x, double a, double b) {
  return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
}

/// Regularized lower incomplete gamma P(a, x), series for x < a+1, continued
/// fraction (modified Lentz) otherwise.
double gamma_p(double a, double x);

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// CDF of InvGamma(shape a, scale b): P(X <= x) = Q(a, b/x)
inline double inv_gamma_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  return gamma_q(a, b / x);
}

inline double log_gamma_pdf(double x, double shape, double scale) {
  if (x <= 0.0) return -HUGE_VAL;
  return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

inline double log_student_t_pdf(double x, double df) {
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * 3.1415926535897932384626433832795) -
         0.5 * (df + 1.0) * std::log1p(x * x / df);
}

/// Density of a bivariate normal with full 2x2 covariance [[v11, v12], [v12, v22]].
inline double binormal_pdf(double x1, double x2, double m1, double m2, double v11, double v12,
                           double v22) {
  const double det = v11 * v22 - v12 * v12;
  if (det <= 0.0) throw NumericalError("binormal covariance not positive definite");
  const double d1 = x1 - m1;
  const double d2 = x2 - m2;
  const double quad = (v22 * d1 * d1 - 2.0 * v12 * d1 * d2 + v11 * d2 * d2) / det;
  return std::exp(-0.5 * quad) / (6.283185307179586476925286766559 * std::sqrt(det));
}

}  // namespace repmix

#endif
