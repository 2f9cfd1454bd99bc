#include "cryptorates/derivatives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cryptorates/errors.hpp"
#include "cryptorates/special_functions.hpp"

namespace cryptorates {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

void check_option_spec(const BondOptionSpec& spec) {
    if (!(spec.expiry > 0.0) || !(spec.bond_maturity > spec.expiry)) {
        throw std::domain_error("bond option: requires 0 < expiry < bond maturity");
    }
    // A digital with zero strike is the sure claim on one unit at expiry and
    // is kept as a valid boundary case; calls and puts need K in (0, 1).
    const bool strike_ok = spec.kind == OptionKind::digital_call
                               ? spec.strike >= 0.0 && spec.strike < 1.0
                               : spec.strike > 0.0 && spec.strike < 1.0;
    if (!strike_ok) throw std::domain_error("bond option: strike must lie in (0, 1)");
}

struct B4Setup {
    double var_0t, var_tT, var_0T, xi_star;
};

B4Setup b4_setup(const BondOptionSpec& spec, const VolatilityCurve& curve) {
    check_option_spec(spec);
    B4Setup s{};
    s.var_0t = accumulated_variance(curve, 0.0, spec.expiry);
    s.var_tT = accumulated_variance(curve, spec.expiry, spec.bond_maturity);
    s.var_0T = s.var_0t + s.var_tT;
    s.xi_star = std::sqrt(-2.0 * s.var_tT * std::log1p(-spec.strike));
    return s;
}

double b4_integrand(double x, double strike, double var_0t, double var_tT) {
    return ((1.0 - strike) - std::exp(-x * x / (2.0 * var_tT))) * bessel_i(1, x / var_0t) *
           std::exp(-(x * x + 1.0) / (2.0 * var_0t));
}

// Shared series for the fourth-order call/put. Terms use the regularized
// upper gamma Q(k+1, z) so nothing overflows; the tail bound is the first
// omitted term. k_max extends to 60 while the last term matters at 1e-16
// relative, per the truncation policy.
PriceQuote b4_series(const BondOptionSpec& spec, const VolatilityCurve& curve, int k_max,
                     bool is_call) {
    const B4Setup s = b4_setup(spec, curve);
    const double K = spec.strike;
    const double c = 1.0 / (2.0 * s.var_0t);
    const double rho = s.var_tT / s.var_0T;
    const double z1 = -s.var_tT / s.var_0t * std::log1p(-K);
    const double z2 = -s.var_0T / s.var_0t * std::log1p(-K);

    double weight = 1.0;  // c^{k+1} / (k+1)! at k
    double rho_pow = 1.0;
    double sum = 0.0;
    double last = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    const int hard_cap = 60;
    for (int k = 0; k <= hard_cap; ++k) {
        weight *= c / (k + 1);
        rho_pow *= rho;
        const double q1 = upper_gamma_regularized(k, z1);
        const double q2 = upper_gamma_regularized(k, z2);
        const double term = is_call
                                ? weight * ((1.0 - K) * q1 - rho_pow * q2)
                                : weight * (rho_pow * (1.0 - q2) - (1.0 - K) * (1.0 - q1));
        sum += term;
        last = std::abs(term);
        // The weights c^{k+1}/(k+1)! may grow until k ~ c; past that the
        // terms must decay, and failure to do so signals bad inputs.
        if (k > c + 2.0 && last >= prev_mag && last > 1e-300) {
            throw ConvergenceError("bessel4 option series: terms stopped decreasing", sum, last);
        }
        prev_mag = std::max(last, 1e-300);
        if (k + 1 > k_max && (last <= 1e-16 * std::abs(sum) || sum == 0.0)) break;
    }
    const double scale = std::exp(-c);
    PriceQuote quote;
    quote.value = scale * sum;
    quote.method = PricingMethod::series;
    quote.err_est = scale * last;
    return quote;
}

PriceQuote b4_quadrature(const BondOptionSpec& spec, const VolatilityCurve& curve,
                         const QuadratureSpec& quad, bool is_call) {
    const B4Setup s = b4_setup(spec, curve);
    const double K = spec.strike;
    QuadratureSpec q = quad;
    if (is_call) {
        // Gaussian factor is below 1e-30 past this cutoff.
        const double upper = s.xi_star + 12.0 * std::sqrt(s.var_0t) + 1.0;
        q.lower = s.xi_star;
        q.upper = upper;
        q.half_line = false;
        const auto res = integrate(
            [&](double x) { return b4_integrand(x, K, s.var_0t, s.var_tT); }, q);
        return {res.value / s.var_0t, PricingMethod::quadrature, res.err_est / s.var_0t};
    }
    q.lower = 0.0;
    q.upper = s.xi_star;
    q.half_line = false;
    const auto res = integrate(
        [&](double x) { return -b4_integrand(x, K, s.var_0t, s.var_tT); }, q);
    return {res.value / s.var_0t, PricingMethod::quadrature, res.err_est / s.var_0t};
}

}  // namespace

const char* to_string(PricingMethod m) {
    switch (m) {
        case PricingMethod::closed_form: return "closed-form";
        case PricingMethod::series: return "series";
        case PricingMethod::quadrature: return "quadrature";
        case PricingMethod::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

double simple_rate(double bond_price, double tenor) {
    if (!(bond_price > 0.0) || bond_price > 1.0) {
        throw std::domain_error("simple_rate: bond price must lie in (0, 1]");
    }
    if (!(tenor > 0.0)) throw std::domain_error("simple_rate: tenor must be positive");
    return (1.0 / bond_price - 1.0) / tenor;
}

std::pair<double, double> strike_notional(const CapletSpec& spec) {
    const double tenor = spec.payment - spec.reset;
    if (!(spec.reset > 0.0) || !(tenor > 0.0)) {
        throw std::domain_error("caplet: requires 0 < reset < payment");
    }
    if (spec.cap_rate < 0.0 || !(spec.notional > 0.0)) {
        throw std::domain_error("caplet: cap rate must be >= 0 and notional > 0");
    }
    const double growth = 1.0 + spec.cap_rate * tenor;
    return {1.0 / growth, spec.notional * growth / tenor};
}

double critical_numeraire(const KernelModel& model, const BondOptionSpec& spec,
                          const VolatilityCurve& curve) {
    check_option_spec(spec);
    const double var_tT = accumulated_variance(curve, spec.expiry, spec.bond_maturity);
    if (std::holds_alternative<Bessel3Params>(model)) {
        return std::sqrt(2.0 * var_tT) * erf_inv(spec.strike);
    }
    if (const auto* p = std::get_if<BesselNParams>(&model); p && p->order == 4) {
        return std::sqrt(-2.0 * var_tT * std::log1p(-spec.strike));
    }
    throw UnsupportedModelError("critical_numeraire: available for orders 3 and 4 only");
}

double digital_call_price(const Bessel3Params& model, const FactorState& state,
                          const BondOptionSpec& spec, const VolatilityCurve& curve) {
    check_option_spec(spec);
    if (!(state.time < spec.expiry)) {
        throw std::domain_error("digital_call_price: state time must precede expiry");
    }
    const double xi_s = state.offsets.norm();
    if (xi_s < 1e-12) throw SingularStateError("digital_call_price: singular state");
    const double xi_star = critical_numeraire(KernelModel{model}, spec, curve);
    const double var_st = accumulated_variance(curve, state.time, spec.expiry);
    const double denom = std::sqrt(2.0 * var_st);
    return 0.5 * (erf((xi_star + xi_s) / denom) - erf((xi_star - xi_s) / denom));
}

PriceQuote caplet_price(const Bessel3Params& model, const CapletSpec& spec,
                        const VolatilityCurve& curve, const QuadratureSpec& quad) {
    const auto [K, N] = strike_notional(spec);
    const double var_0t = accumulated_variance(curve, 0.0, spec.reset);
    const double var_tT = accumulated_variance(curve, spec.reset, spec.payment);
    (void)model;

    // R = 0 gives K = 1 and xi* = inf: the payout (1 - P)^+ is sure, and the
    // integration range is capped by the Gaussian cutoff below.
    const double root_tT = std::sqrt(2.0 * var_tT);
    const double xi_star =
        K < 1.0 ? root_tT * erf_inv(K) : std::numeric_limits<double>::infinity();
    if (xi_star == 0.0) return {0.0, PricingMethod::quadrature, 0.0};
    auto integrand = [&](double x) {
        return (K - erf(x / root_tT)) * (std::exp(-(x - 1.0) * (x - 1.0) / (2.0 * var_0t)) -
                                         std::exp(-(x + 1.0) * (x + 1.0) / (2.0 * var_0t)));
    };
    // The Gaussian factor is centred at 1; past this point it is below 1e-30.
    const double cutoff = 1.0 + 12.0 * std::sqrt(var_0t);
    QuadratureSpec q = quad;
    q.lower = 0.0;
    q.upper = std::min(xi_star, cutoff);
    q.half_line = false;
    const auto res = integrate(integrand, q);
    const double scale = N / (kSqrt2Pi * std::sqrt(var_0t));
    return {scale * res.value, PricingMethod::quadrature, scale * res.err_est};
}

PriceQuote bessel4_bond_call(const BondOptionSpec& spec, const VolatilityCurve& curve,
                             Bessel4Method method, int k_max, const QuadratureSpec& quad) {
    if (spec.kind != OptionKind::call) throw std::domain_error("bessel4_bond_call: spec.kind must be call");
    return method == Bessel4Method::series ? b4_series(spec, curve, k_max, true)
                                           : b4_quadrature(spec, curve, quad, true);
}

PriceQuote bessel4_bond_put(const BondOptionSpec& spec, const VolatilityCurve& curve,
                            Bessel4Method method, int k_max, const QuadratureSpec& quad) {
    if (spec.kind != OptionKind::put) throw std::domain_error("bessel4_bond_put: spec.kind must be put");
    return method == Bessel4Method::series ? b4_series(spec, curve, k_max, false)
                                           : b4_quadrature(spec, curve, quad, false);
}

}  // namespace cryptorates
