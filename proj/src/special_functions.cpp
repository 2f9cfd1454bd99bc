#include "cryptorates/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cryptorates/errors.hpp"

namespace cryptorates {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125739;
constexpr double kSqrtPi = 1.7724538509055160273;

// Maclaurin series of erf, valid everywhere, used for |x| <= 2 where no
// significant cancellation occurs.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 120; ++n) {
        term *= -x2 / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return kTwoOverSqrtPi * sum;
}

// Lentz evaluation of the continued fraction
//   sqrt(pi) exp(x^2) erfc(x) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// convergent for x >= 2.
double erfcx_cf(double x) {
    const double tiny = 1e-300;
    double c = 1.0 / tiny;
    double d = 1.0 / x;
    double h = d;
    for (int k = 1; k < 300; ++k) {
        const double a = 0.5 * k;
        d = 1.0 / (x + a * d);
        c = x + a / c;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return h / kSqrtPi;
}

}  // namespace

double erfcx(double x) {
    if (!(x > 0.0)) throw std::domain_error("erfcx: requires x > 0");
    if (x < 2.0) return std::exp(x * x) * (1.0 - erf_series(x));
    return erfcx_cf(x);
}

double erf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erf: non-finite argument");
    const double ax = std::abs(x);
    if (ax <= 2.0) return erf_series(x);
    const double tail = erfcx_cf(ax) * std::exp(-ax * ax);
    return x > 0.0 ? 1.0 - tail : tail - 1.0;
}

double erfc(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erfc: non-finite argument");
    if (x > 2.0) return erfcx_cf(x) * std::exp(-x * x);
    if (x < -2.0) return 2.0 - erfcx_cf(-x) * std::exp(-x * x);
    return 1.0 - erf_series(x);
}

double erf_inv(double p) {
    if (!(std::abs(p) < 1.0)) throw std::domain_error("erf_inv: |p| must be < 1");
    if (p == 0.0) return 0.0;
    const double sign = p > 0.0 ? 1.0 : -1.0;
    const double q = std::abs(p);

    // Winitzki's global approximation as the starting point.
    const double a = 0.147;
    const double w = std::log1p(-q * q);
    const double u = 2.0 / (3.14159265358979323846 * a) + 0.5 * w;
    double x = std::sqrt(std::sqrt(u * u - w / a) - u);

    // Newton on erf(x) - q. For q near 1, evaluate the residual through the
    // scaled complement so 1 - erf(x) keeps full precision.
    for (int it = 0; it < 60; ++it) {
        double resid;
        if (x > 2.0) {
            resid = (1.0 - q) - erfcx_cf(x) * std::exp(-x * x);
        } else {
            resid = erf_series(x) - q;
        }
        const double deriv = kTwoOverSqrtPi * std::exp(-x * x);
        const double step = resid / deriv;
        x -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x)) || std::abs(resid) < 1e-17) break;
    }
    return sign * x;
}

double bessel_i(int n, double v) {
    if (n != 0 && n != 1) throw std::domain_error("bessel_i: only orders 0 and 1 supported");
    if (!std::isfinite(v)) throw std::domain_error("bessel_i: non-finite argument");
    const double av = std::abs(v);
    // I0 is even, I1 odd.
    const double sign = (n == 1 && v < 0.0) ? -1.0 : 1.0;

    if (av <= 15.0) {
        // Power series sum_k (v/2)^{2k+n} / (k! (n+k)!), all terms positive.
        const double h = 0.5 * av;
        double term = (n == 0) ? 1.0 : h;
        double sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= h * h / (static_cast<double>(k) * (k + n));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sign * sum;
    }

    // Large-argument expansion I_n(v) ~ e^v / sqrt(2 pi v) * sum_k u_k with
    // u_0 = 1, u_{k+1} = -u_k (mu - (2k+1)^2) / (8 v (k+1)), mu = 4 n^2.
    // Truncated at the smallest term (remainder ~ e^{-2v} relative).
    const double mu = 4.0 * n * n;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double odd = 2.0 * k + 1.0;
        term *= -(mu - odd * odd) / (8.0 * av * (k + 1));
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * std::abs(sum)) break;
    }
    return sign * std::exp(av) / std::sqrt(2.0 * 3.14159265358979323846 * av) * sum;
}

double upper_gamma_regularized(int k, double z) {
    if (k < 0) throw std::domain_error("upper_gamma: k must be >= 0");
    if (z < 0.0) throw std::domain_error("upper_gamma: z must be >= 0");
    // Q(k+1, z) = e^{-z} sum_{m=0..k} z^m / m!, exact for integer order.
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m <= k; ++m) {
        term *= z / m;
        sum += term;
    }
    return std::exp(-z) * sum;
}

double upper_gamma_int(int k, double z) {
    return std::tgamma(static_cast<double>(k) + 1.0) * upper_gamma_regularized(k, z);
}

double normal_cdf(double x) {
    return 0.5 * (1.0 + erf(x * 0.70710678118654752440));
}

std::complex<double> erf(std::complex<double> z) {
    const double az = std::abs(z);
    if (az <= 3.0) {
        // Entire power series; cancellation stays below ~1e3 ulp for |z| <= 3.
        const std::complex<double> z2 = z * z;
        std::complex<double> term = z;
        std::complex<double> sum = z;
        for (int n = 1; n < 200; ++n) {
            term *= -z2 / static_cast<double>(n);
            const std::complex<double> add = term / static_cast<double>(2 * n + 1);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return kTwoOverSqrtPi * sum;
    }
    if (z.real() < 0.0) return -erf(-z);
    if (std::abs(std::arg(z)) >= 2.356194490192344929 * 0.5) {  // 3 pi / 8
        throw std::domain_error("erf(complex): argument outside supported sector");
    }
    // Continued fraction for the complement, as in the real case.
    const std::complex<double> tiny(1e-300, 0.0);
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / z;
    std::complex<double> h = d;
    for (int k = 1; k < 400; ++k) {
        const double a = 0.5 * k;
        d = 1.0 / (z + a * d);
        c = z + a / c;
        const std::complex<double> delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return 1.0 - std::exp(-z * z) * h / kSqrtPi;
}

}  // namespace cryptorates
