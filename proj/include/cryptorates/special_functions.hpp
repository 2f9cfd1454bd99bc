#pragma once

#include <complex>

namespace cryptorates {

/// Error function, (2/sqrt(pi)) * int_0^x exp(-u^2) du. Maclaurin series for
/// |x| <= 2, complementary continued fraction beyond.
double erf(double x);

/// Complementary error function, 1 - erf(x).
double erfc(double x);

/// Scaled complement exp(x^2) * erfc(x), x > 0. Stays representable far into
/// the tail where erfc underflows.
double erfcx(double x);

/// Inverse of erf on (-1, 1). Newton iteration on erf with a rational initial
/// guess; converges to |erf(x) - p| < 1e-15.
double erf_inv(double p);

/// Modified Bessel function of the first kind, orders 0 and 1 only.
/// Power series for v <= 15, large-argument asymptotic expansion beyond.
double bessel_i(int n, double v);

/// Upper incomplete gamma with integer first argument:
/// Gamma(k+1, z) = k! * exp(-z) * sum_{m=0..k} z^m / m!.
double upper_gamma_int(int k, double z);

/// Regularized form Q(k+1, z) = Gamma(k+1, z) / k!, in (0, 1].
double upper_gamma_regularized(int k, double z);

/// Standard normal distribution function, (1 + erf(x / sqrt 2)) / 2.
double normal_cdf(double x);

/// erf extended to complex argument through its entire power series
/// (|z| <= 3) and the complementary continued fraction (larger |z|,
/// |arg z| < 3pi/8). Sufficient for the complexified kernel, whose
/// arguments stay near the positive real axis.
std::complex<double> erf(std::complex<double> z);

}  // namespace cryptorates
