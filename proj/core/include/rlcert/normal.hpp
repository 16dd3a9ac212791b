#pragma once

#include <cstddef>

namespace rlcert {

inline constexpr double kSqrtTwoOverPi = 0.7978845608028653558798921;

/// Standard normal CDF. Absolute error is a few ulp over the full double
/// range (computed through erfc, no cancellation in either tail).
double std_normal_cdf(double x);

/// Inverse standard normal CDF on the open interval (0,1).
/// Rational initial guess refined by one Halley step against std_normal_cdf;
/// |std_normal_cdf(std_normal_inv_cdf(p)) - p| stays below 1e-15 for
/// p in [1e-9, 1-1e-9]. Throws DomainError outside (0,1); callers clamp first.
double std_normal_inv_cdf(double p);

/// One-sided Hoeffding half-width for the mean of m samples of a variable
/// with the given range, at confidence level alpha:
///   delta = range * sqrt(ln(1/alpha) / (2m)).
double hoeffding_delta(std::size_t m, double alpha, double range);

}  // namespace rlcert
