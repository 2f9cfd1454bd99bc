#pragma once

#include <utility>

#include "cryptorates/kernels.hpp"
#include "cryptorates/quadrature.hpp"
#include "cryptorates/term_structure.hpp"

namespace cryptorates {

/// How a price was produced, carried alongside the value.
enum class PricingMethod { closed_form, series, quadrature, monte_carlo };

struct PriceQuote {
    double value = 0.0;
    PricingMethod method = PricingMethod::closed_form;
    /// Error estimate: 0 for closed forms, quadrature error estimate, series
    /// tail bound, or Monte Carlo standard error.
    double err_est = 0.0;
};

const char* to_string(PricingMethod m);

/// In-arrears caplet on the simple crypto rate: pays X (L_{tT} - R)^+ at the
/// payment date, with the rate fixed at the reset date.
struct CapletSpec {
    double reset = 0.0;        // t
    double payment = 0.0;      // T > t
    double cap_rate = 0.0;     // R >= 0
    double notional = 1.0;     // X > 0
};

enum class OptionKind { call, put, digital_call };

/// European option on a discount bond: exercise at `expiry` against a bond
/// maturing at `bond_maturity`, strike in (0, 1).
struct BondOptionSpec {
    double expiry = 0.0;         // t
    double bond_maturity = 0.0;  // T > t
    double strike = 0.5;         // K in (0, 1)
    OptionKind kind = OptionKind::call;
};

/// Simple term rate (1/tenor)(1/P - 1) implied by a discount factor.
double simple_rate(double bond_price, double tenor);

/// Equivalent put strike and notional of an in-arrears caplet:
/// K = 1 / (1 + R (T - t)), N = X (1 + R (T - t)) / (T - t).
std::pair<double, double> strike_notional(const CapletSpec& spec);

/// Critical numeraire level xi* above which the bond at expiry is worth more
/// than the strike: sqrt(2 Sigma_tT) erf_inv(K) for order 3,
/// sqrt(-2 Sigma_tT log(1 - K)) for order 4.
double critical_numeraire(const KernelModel& model, const BondOptionSpec& spec,
                          const VolatilityCurve& curve);

/// Digital call on a third-order discount bond, valued at the state's time
/// s < expiry:
///   D_s = (1/2) [erf((xi* + xi_s)/sqrt(2 Sigma_st))
///                - erf((xi* - xi_s)/sqrt(2 Sigma_st))].
/// At s = 0 (xi_0 = 1) this is the standard time-0 digital price; for K -> 0
/// it collapses to the discount bond to expiry.
double digital_call_price(const Bessel3Params& model, const FactorState& state,
                          const BondOptionSpec& spec, const VolatilityCurve& curve);

/// Time-0 in-arrears caplet price in the third-order model (xi_0 = 1),
/// valued as N puts through the single radial integral
///   N / sqrt(2 pi Sigma_0t) * int_0^{xi*} (K - erf(x / sqrt(2 Sigma_tT)))
///     (e^{-(x-1)^2 / 2 Sigma_0t} - e^{-(x+1)^2 / 2 Sigma_0t}) dx.
PriceQuote caplet_price(const Bessel3Params& model, const CapletSpec& spec,
                        const VolatilityCurve& curve, const QuadratureSpec& quad = {});

enum class Bessel4Method { quadrature, series };

/// Time-0 call on a fourth-order discount bond (xi_0 = 1). Either adaptive
/// quadrature of
///   (1/Sigma_0t) int_{xi*}^inf ((1-K) - e^{-x^2/2 Sigma_tT})
///       I_1(x/Sigma_0t) e^{-(x^2+1)/2 Sigma_0t} dx
/// or the rapidly converging incomplete-gamma series (k_max terms, extended
/// automatically to 60 while the last term is above 1e-16 relative).
PriceQuote bessel4_bond_call(const BondOptionSpec& spec, const VolatilityCurve& curve,
                             Bessel4Method method = Bessel4Method::series, int k_max = 20,
                             const QuadratureSpec& quad = {});

/// Fourth-order bond put, same two evaluation routes. Satisfies put-call
/// parity C - P = P_0T - K P_0t against the call.
PriceQuote bessel4_bond_put(const BondOptionSpec& spec, const VolatilityCurve& curve,
                            Bessel4Method method = Bessel4Method::series, int k_max = 20,
                            const QuadratureSpec& quad = {});

}  // namespace cryptorates
