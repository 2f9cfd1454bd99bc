#include "doctest.h"

#include <cmath>

#include "cryptorates/quadrature.hpp"
#include "cryptorates/special_functions.hpp"

using namespace cryptorates;

TEST_CASE("linear integrand is exact") {
    const auto res = integrate([](double x) { return x; }, QuadratureSpec::interval(0.0, 1.0));
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(res.err_est >= 0.0);
}

TEST_CASE("gaussian on the half line") {
    const auto res = integrate([](double u) { return std::exp(-u * u); },
                               QuadratureSpec::half_infinite(0.0));
    CHECK(std::abs(res.value - 0.88622692545275801365) < 1e-12);
}

TEST_CASE("gaussian moment of bessel I1 matches its closed form") {
    // int_0^inf e^{-u^2/2} I1(eta u) du = (e^{eta^2/2} - 1) / eta
    for (double eta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        QuadratureSpec spec = QuadratureSpec::half_infinite(0.0);
        spec.rel_tol = 1e-12;
        const auto res = integrate(
            [eta](double u) {
                // I1 alone overflows far in the tail; the product is below
                // the double underflow threshold there.
                if (0.5 * u * u - eta * u > 745.0) return 0.0;
                return std::exp(-0.5 * u * u) * bessel_i(1, eta * u);
            },
            spec);
        const double target = std::expm1(0.5 * eta * eta) / eta;
        CHECK(std::abs(res.value - target) <= 1e-9 * std::max(1.0, target));
    }
}

TEST_CASE("subdivision limit raises with the best estimate attached") {
    QuadratureSpec spec = QuadratureSpec::interval(0.0, 10.0);
    spec.max_subdivisions = 2;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    try {
        integrate([](double x) { return std::sin(50.0 * x) * std::exp(x); }, spec);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_value()));
        CHECK(e.err_est() > 0.0);
    }
}

TEST_CASE("invalid tolerances are rejected") {
    QuadratureSpec spec;
    spec.abs_tol = 0.0;
    CHECK_THROWS_AS(integrate([](double x) { return x; }, spec), std::domain_error);
    spec = {};
    spec.max_subdivisions = 0;
    CHECK_THROWS_AS(integrate([](double x) { return x; }, spec), std::domain_error);
}

TEST_CASE("smooth oscillatory integral converges to the analytic value") {
    // int_0^pi sin x dx = 2
    const auto res = integrate([](double x) { return std::sin(x); },
                               QuadratureSpec::interval(0.0, 3.14159265358979323846));
    CHECK(std::abs(res.value - 2.0) < 1e-13);
}
