#pragma once

#include <utility>
#include <vector>

namespace cryptorates {

/// Deterministic, piecewise-constant volatility function sigma_t. Knot times
/// are strictly increasing and start at 0; the last value extends to +inf.
/// All values must be strictly positive and bounded by `cap`.
///
/// The stored step function is right-continuous: knot i's value applies on
/// [t_i, t_{i+1}). This realizes the same accumulated variance as any other
/// convention and matches the forward-rate convention at knot maturities.
class VolatilityCurve {
  public:
    /// knots: list of (time, sigma) pairs.
    explicit VolatilityCurve(std::vector<std::pair<double, double>> knots, double cap = 100.0);

    static VolatilityCurve constant(double sigma) { return VolatilityCurve({{0.0, sigma}}); }

    /// sigma at time t (value of the segment [t_i, t_{i+1}) containing t).
    double sigma(double t) const;

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  private:
    std::vector<std::pair<double, double>> knots_;
};

/// Accumulated variance Sigma_{tT} = int_t^T sigma_s^2 ds, evaluated as an
/// exact finite sum over the constant segments.
double accumulated_variance(const VolatilityCurve& curve, double t, double T);

/// Cross variance int_t^T sigma^a_s sigma^b_s ds between two curves, exact on
/// the merged segment grid. Needed for joint sampling of currencies that
/// share factors but carry different volatility functions.
double cross_variance(const VolatilityCurve& a, const VolatilityCurve& b, double t, double T);

}  // namespace cryptorates
