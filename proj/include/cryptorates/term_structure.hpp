#pragma once

#include <complex>
#include <vector>

#include "cryptorates/kernels.hpp"
#include "cryptorates/volatility.hpp"

namespace cryptorates {

/// One quoted point of the initial yield curve.
struct YieldPoint {
    double maturity = 0.0;
    double yield = 0.0;
};

/// Sampled yield with its maturity derivative, as needed by the fourth-order
/// calibration formula.
struct YieldSample {
    double maturity = 0.0;
    double yield = 0.0;
    double yield_derivative = 0.0;
};

/// Complex radius of the complexified kernel at a state:
/// omega^2 = xi^2 - |delta|^2 - 2 i (offsets . delta). The principal root has
/// Re(omega) >= 0.
struct OmegaState {
    std::complex<double> omega_sq;

    std::complex<double> omega() const { return principal_sqrt(omega_sq); }
};

OmegaState omega_state(const ComplexBessel3Params& params, const FactorState& state);

/// Discount bond price P_{tT} at the given state, T >= state.time.
///
///   order 3:  erf(xi / sqrt(2 Sigma_tT))
///   order 4:  1 - exp(-xi^2 / (2 Sigma_tT))
///   complex:  Re(omega^-1 erf(omega / sqrt(2 Sigma_tT))) / Re(omega^-1)
///
/// Returns exactly 1 at T = state.time. Orders n >= 5 have no closed form
/// here and are priced by the Monte Carlo oracle instead.
double bond_price(const KernelModel& model, const FactorState& state, const VolatilityCurve& curve,
                  double T);

/// Instantaneous forward rate f_{tT} = -d log P_{tT} / dT, T > state.time.
/// At a volatility knot the right-hand segment value sigma_T is used, since
/// the stored curve is right-continuous. Vanishes as T -> t.
double forward_rate(const KernelModel& model, const FactorState& state,
                    const VolatilityCurve& curve, double T);

/// Short rate. Identically zero for every kernel housed here; see
/// bond_decay_rate for the pre-limit expression that the tests drive to 0.
double short_rate(const KernelModel& model, const FactorState& state);

/// -dP_{tT}/dT, whose T -> t limit defines the short rate. The exponential
/// factor exp(-xi^2 / 2 Sigma) crushes it to zero in that limit.
double bond_decay_rate(const KernelModel& model, const FactorState& state,
                       const VolatilityCurve& curve, double T);

/// Initial yield Y(T) = -(1/T) log P_{0T}, T > 0.
double initial_yield(const KernelModel& model, const VolatilityCurve& curve, double T);

/// Discount bond volatility Omega_{tT}, T > state.time:
///   order 3:  2 sigma_t exp(-xi^2 / 2 Sigma) / (P sqrt(2 pi Sigma))
///   order 4:  sigma_t xi exp(-xi^2 / 2 Sigma) / (P Sigma)
double bond_volatility(const KernelModel& model, const FactorState& state,
                       const VolatilityCurve& curve, double T);

/// Bootstrap a piecewise-constant volatility curve that reprices the given
/// yield points exactly under the third-order model. The implied accumulated
/// variances Sigma*_{0T_i} = 1 / (2 erf_inv(exp(-T_i Y_i))^2) are
/// interpolated linearly between maturities, which keeps sigma^2 constant
/// and positive on each segment. Throws CalibrationError (naming the
/// maturity) if the implied variances fail to increase.
VolatilityCurve calibrate_bessel3(const std::vector<YieldPoint>& points);

/// Pointwise fourth-order calibration,
///   sigma_T^2 = (Y + T Y') e^{-TY} / (2 (1 - e^{-TY}) log(1 - e^{-TY})^2),
/// one value per sample with maturity > 0. A sample at maturity 0 must carry
/// a vanishing yield. Nonpositive variances raise CalibrationError.
std::vector<double> calibrate_bessel4(const std::vector<YieldSample>& samples);

}  // namespace cryptorates
