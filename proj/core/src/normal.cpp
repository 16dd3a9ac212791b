#include "rlcert/normal.hpp"

#include <cmath>
#include <string>

#include "rlcert/errors.hpp"

namespace rlcert {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887;
constexpr double kSqrt2Pi = 2.5066282746310005024157653;

// Rational approximation of the inverse normal CDF (P. Acklam's coefficients,
// relative error below 1.15e-9 on its own). Used only as the initial guess.
double inv_cdf_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_inv_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("std_normal_inv_cdf: p must lie strictly in (0,1), got " +
                      std::to_string(p));
  }
  double x = inv_cdf_estimate(p);
  // One Halley step. The residual is evaluated through the tail-accurate CDF,
  // which pushes the CDF-level error down to rounding noise.
  const double err = std_normal_cdf(x) - p;
  const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double hoeffding_delta(std::size_t m, double alpha, double range) {
  if (m < 1) throw DomainError("hoeffding_delta: m must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError("hoeffding_delta: alpha must lie in (0,1)");
  }
  if (range < 0.0) throw DomainError("hoeffding_delta: range must be >= 0");
  return range * std::sqrt(std::log(1.0 / alpha) / (2.0 * static_cast<double>(m)));
}

}  // namespace rlcert
