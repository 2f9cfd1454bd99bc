#include "cryptorates/term_structure.hpp"

#include <cmath>
#include <stdexcept>

#include "cryptorates/errors.hpp"
#include "cryptorates/special_functions.hpp"

namespace cryptorates {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

struct BondInputs {
    double xi;
    double variance;
};

BondInputs bond_inputs(const KernelModel& model, const FactorState& state,
                       const VolatilityCurve& curve, double T) {
    if (T < state.time) throw std::domain_error("bond_price: maturity before state time");
    const double variance = accumulated_variance(curve, state.time, T);
    const double xi = state.offsets.norm();
    if (xi < 1e-12) throw SingularStateError("bond: state at the singular center");
    (void)model;
    return {xi, variance};
}

int bessel_order(const KernelModel& model) {
    if (std::holds_alternative<Bessel3Params>(model)) return 3;
    if (const auto* p = std::get_if<BesselNParams>(&model)) return p->order;
    return 0;  // complex
}

}  // namespace

OmegaState omega_state(const ComplexBessel3Params& params, const FactorState& state) {
    if (state.offsets.size() != 3) throw std::domain_error("omega_state: state must be 3-dimensional");
    const Eigen::Vector3d off = state.offsets;
    const double xi2 = off.squaredNorm();
    const double d2 = params.center_im.squaredNorm();
    const double dot = off.dot(params.center_im);
    return {{xi2 - d2, -2.0 * dot}};
}

double bond_price(const KernelModel& model, const FactorState& state, const VolatilityCurve& curve,
                  double T) {
    const auto [xi, variance] = bond_inputs(model, state, curve, T);
    if (variance == 0.0) return 1.0;

    if (const auto* cp = std::get_if<ComplexBessel3Params>(&model)) {
        const OmegaState om = omega_state(*cp, state);
        if (std::abs(om.omega_sq) < 1e-12) {
            throw SingularStateError("bond: state on the ring singularity");
        }
        const std::complex<double> w = om.omega();
        const std::complex<double> winv = 1.0 / w;
        if (winv.real() <= 1e-12) {
            throw SingularStateError("bond: Re(1/omega) not positive at this state");
        }
        const std::complex<double> z = w / std::sqrt(2.0 * variance);
        return (winv * erf(z)).real() / winv.real();
    }

    const int n = bessel_order(model);
    const double arg = xi / std::sqrt(2.0 * variance);
    if (n == 3) return erf(arg);
    if (n == 4) return -std::expm1(-arg * arg);
    throw UnsupportedModelError("bond_price: no closed form for order >= 5; use the Monte Carlo oracle");
}

double forward_rate(const KernelModel& model, const FactorState& state,
                    const VolatilityCurve& curve, double T) {
    if (T <= state.time) throw std::domain_error("forward_rate: requires T > state.time");
    const auto [xi, variance] = bond_inputs(model, state, curve, T);
    const double sigma_T = curve.sigma(T);
    const double expfac = std::exp(-xi * xi / (2.0 * variance));
    const int n = bessel_order(model);
    if (n == 3) {
        const double p = erf(xi / std::sqrt(2.0 * variance));
        return sigma_T * sigma_T * expfac / (kSqrt2Pi * std::pow(variance, 1.5) * p);
    }
    if (n == 4) {
        const double p = -std::expm1(-xi * xi / (2.0 * variance));
        return sigma_T * sigma_T * xi * xi * expfac / (2.0 * variance * variance * p);
    }
    throw UnsupportedModelError("forward_rate: closed form available for orders 3 and 4 only");
}

double short_rate(const KernelModel& model, const FactorState& state) {
    if (state.offsets.size() != model_dimension(model)) {
        throw std::domain_error("short_rate: state dimension does not match model");
    }
    return 0.0;
}

double bond_decay_rate(const KernelModel& model, const FactorState& state,
                       const VolatilityCurve& curve, double T) {
    if (T <= state.time) throw std::domain_error("bond_decay_rate: requires T > state.time");
    const auto [xi, variance] = bond_inputs(model, state, curve, T);
    const double sigma_T = curve.sigma(T);
    const double expfac = std::exp(-xi * xi / (2.0 * variance));
    const int n = bessel_order(model);
    if (n == 3) return sigma_T * sigma_T * xi * expfac / (kSqrt2Pi * std::pow(variance, 1.5));
    if (n == 4) return sigma_T * sigma_T * xi * xi * expfac / (2.0 * variance * variance);
    throw UnsupportedModelError("bond_decay_rate: closed form available for orders 3 and 4 only");
}

double initial_yield(const KernelModel& model, const VolatilityCurve& curve, double T) {
    if (!(T > 0.0)) throw std::domain_error("initial_yield: requires T > 0");
    const double p = bond_price(model, initial_state(model), curve, T);
    return -std::log(p) / T;
}

double bond_volatility(const KernelModel& model, const FactorState& state,
                       const VolatilityCurve& curve, double T) {
    if (T <= state.time) throw std::domain_error("bond_volatility: requires T > state.time");
    const auto [xi, variance] = bond_inputs(model, state, curve, T);
    const double sigma_t = curve.sigma(state.time);
    const double expfac = std::exp(-xi * xi / (2.0 * variance));
    const double p = bond_price(model, state, curve, T);
    const int n = bessel_order(model);
    if (n == 3) return 2.0 * sigma_t * expfac / (p * std::sqrt(2.0 * 3.14159265358979323846 * variance));
    if (n == 4) return sigma_t * xi * expfac / (p * variance);
    throw UnsupportedModelError("bond_volatility: closed form available for orders 3 and 4 only");
}

VolatilityCurve calibrate_bessel3(const std::vector<YieldPoint>& points) {
    if (points.empty()) throw std::domain_error("calibrate_bessel3: no quotes");
    std::vector<std::pair<double, double>> knots;
    knots.reserve(points.size());
    double prev_T = 0.0;
    double prev_var = 0.0;
    for (const auto& pt : points) {
        if (!(pt.maturity > prev_T)) {
            throw std::domain_error("calibrate_bessel3: maturities must be positive and strictly increasing");
        }
        const double price = std::exp(-pt.maturity * pt.yield);
        if (!(price > 0.0) || !(price < 1.0)) {
            throw CalibrationError("calibrate_bessel3: implied bond price outside (0, 1) at maturity " +
                                       std::to_string(pt.maturity),
                                   pt.maturity);
        }
        const double q = erf_inv(price);
        const double implied_var = 1.0 / (2.0 * q * q);
        if (implied_var <= prev_var) {
            throw CalibrationError(
                "calibrate_bessel3: implied accumulated variance not increasing at maturity " +
                    std::to_string(pt.maturity),
                pt.maturity);
        }
        const double seg_var_rate = (implied_var - prev_var) / (pt.maturity - prev_T);
        knots.emplace_back(prev_T, std::sqrt(seg_var_rate));
        prev_T = pt.maturity;
        prev_var = implied_var;
    }
    return VolatilityCurve(std::move(knots));
}

std::vector<double> calibrate_bessel4(const std::vector<YieldSample>& samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.maturity < 0.0) throw std::domain_error("calibrate_bessel4: negative maturity");
        if (s.maturity <= 1e-12) {
            if (std::abs(s.yield) > 1e-9) {
                throw CalibrationError("calibrate_bessel4: Y(0) must vanish", 0.0);
            }
            continue;
        }
        const double ty = s.maturity * s.yield;
        if (!(ty > 0.0)) {
            throw CalibrationError("calibrate_bessel4: nonpositive yield at maturity " +
                                       std::to_string(s.maturity),
                                   s.maturity);
        }
        const double e = std::exp(-ty);
        const double one_minus = -std::expm1(-ty);
        const double lg = std::log(one_minus);
        const double var = (s.yield + s.maturity * s.yield_derivative) * e /
                           (2.0 * one_minus * lg * lg);
        if (!(var > 0.0)) {
            throw CalibrationError("calibrate_bessel4: nonpositive variance rate at maturity " +
                                       std::to_string(s.maturity),
                                   s.maturity);
        }
        out.push_back(var);
    }
    return out;
}

}  // namespace cryptorates
