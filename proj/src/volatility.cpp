#include "cryptorates/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cryptorates {

VolatilityCurve::VolatilityCurve(std::vector<std::pair<double, double>> knots, double cap)
    : knots_(std::move(knots)) {
    if (knots_.empty()) throw std::domain_error("VolatilityCurve: needs at least one knot");
    if (knots_.front().first != 0.0) throw std::domain_error("VolatilityCurve: first knot must be at t = 0");
    double prev = -1.0;
    for (const auto& [t, s] : knots_) {
        if (!std::isfinite(t) || !std::isfinite(s)) throw std::domain_error("VolatilityCurve: non-finite knot");
        if (t <= prev) throw std::domain_error("VolatilityCurve: knot times must be strictly increasing");
        if (!(s > 0.0) || s > cap) throw std::domain_error("VolatilityCurve: sigma must be in (0, cap]");
        prev = t;
    }
}

double VolatilityCurve::sigma(double t) const {
    if (t < 0.0) throw std::domain_error("VolatilityCurve: negative time");
    double value = knots_.front().second;
    for (const auto& [tk, s] : knots_) {
        if (tk > t) break;
        value = s;
    }
    return value;
}

double accumulated_variance(const VolatilityCurve& curve, double t, double T) {
    if (t > T) throw std::domain_error("accumulated_variance: requires t <= T");
    if (t < 0.0) throw std::domain_error("accumulated_variance: negative time");
    const auto& ks = curve.knots();
    double sum = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double seg_lo = ks[i].first;
        const double seg_hi = (i + 1 < ks.size()) ? ks[i + 1].first : T;
        const double lo = std::max(seg_lo, t);
        const double hi = std::min(seg_hi, T);
        if (hi > lo) sum += ks[i].second * ks[i].second * (hi - lo);
    }
    return sum;
}

double cross_variance(const VolatilityCurve& a, const VolatilityCurve& b, double t, double T) {
    if (t > T) throw std::domain_error("cross_variance: requires t <= T");
    if (t < 0.0) throw std::domain_error("cross_variance: negative time");
    // Merge the two knot grids; on each merged segment both curves are constant.
    std::vector<double> cuts{t, T};
    for (const auto& [tk, s] : a.knots())
        if (tk > t && tk < T) cuts.push_back(tk);
    for (const auto& [tk, s] : b.knots())
        if (tk > t && tk < T) cuts.push_back(tk);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi > lo) sum += a.sigma(lo) * b.sigma(lo) * (hi - lo);
    }
    return sum;
}

}  // namespace cryptorates
