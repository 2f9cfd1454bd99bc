// Acceptance suite: runs the twelve gate criteria end to end and prints one
// PASS/FAIL line each. Exits nonzero if any criterion fails. Every tolerance
// is pinned here, in code.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cryptorates/derivatives.hpp"
#include "cryptorates/fx.hpp"
#include "cryptorates/io.hpp"
#include "cryptorates/kernels.hpp"
#include "cryptorates/mc.hpp"
#include "cryptorates/quadrature.hpp"
#include "cryptorates/special_functions.hpp"
#include "cryptorates/term_structure.hpp"

using namespace cryptorates;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %-38s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

const KernelModel kB3 = Bessel3Params{};
const KernelModel kB4 = BesselNParams::canonical(4);

FactorState unit_state3() { return {0.0, Eigen::Vector3d(0.0, 0.0, -1.0)}; }

FactorState unit_state4() {
    FactorState s{0.0, Eigen::VectorXd::Zero(4)};
    s.offsets[3] = -1.0;
    return s;
}

// 1. Pre-limit short-rate expression decreases through {1e-2, 1e-3, 1e-4}
//    and is below 1e-12 at 1e-3 for both closed-form models.
void criterion_short_rate() {
    const auto curve = VolatilityCurve::constant(0.75);
    bool pass = true;
    double worst = 0.0;
    for (const auto& [model, state] : {std::pair{kB3, unit_state3()}, {kB4, unit_state4()}}) {
        const double r1 = bond_decay_rate(model, state, curve, 1e-2);
        const double r2 = bond_decay_rate(model, state, curve, 1e-3);
        const double r3 = bond_decay_rate(model, state, curve, 1e-4);
        pass = pass && r1 > r2 && r2 >= r3 && r2 < 1e-12;
        pass = pass && short_rate(model, state) == 0.0;
        worst = std::max(worst, r2);
    }
    report(1, "short rate zero", pass, fmt("max pre-limit value at 1e-3: %.3g", worst));
}

// 2. Strict local martingale gap at t = 2, sigma = 0.75, 1e5 samples.
void criterion_strictness() {
    const auto curve = VolatilityCurve::constant(0.75);
    const auto est = price_claim(
        kB3, curve, [](const FactorState&) { return 1.0; }, 2.0, 100000);
    const double target = cryptorates::erf(1.0 / std::sqrt(2.25));
    const bool matches = std::abs(est.mean - target) <= 3.0 * est.std_err;
    const bool strict = est.mean < 1.0 - 3.0 * est.std_err;
    report(2, "strict local martingale gap", matches && strict,
           fmt("mean %.6f vs erf(1/sqrt 2.25) %.6f, se %.2g", est.mean, target, est.std_err));
}

// 3. Tower property of deflated bonds for both models.
void criterion_martingale() {
    const auto m3 = martingale_test(kB3, VolatilityCurve::constant(0.75), 2.0, 1.0, 100000);
    const auto m4 = martingale_test(kB4, VolatilityCurve::constant(0.6), 2.0, 1.0, 100000);
    report(3, "deflated-bond martingale", m3.pass && m4.pass,
           fmt("z3 = %.2f, z4 = %.2f", (m3.statistic - m3.target) / m3.std_err,
               (m4.statistic - m4.target) / m4.std_err));
}

// 4. Analytic martingale identity by quadrature at three parameter triples.
void criterion_erf_identity() {
    bool pass = true;
    double worst = 0.0;
    for (const auto& [x, a, b] : {std::tuple{1.0, 0.5, 0.5}, {0.7, 1.0, 2.0}, {2.0, 0.2, 1.0}}) {
        QuadratureSpec spec = QuadratureSpec::half_infinite(0.0);
        spec.rel_tol = 1e-12;
        const double norm = 1.0 / std::sqrt(3.14159265358979323846 * a);
        const auto res = integrate(
            [&, x = x, a = a, b = b](double xi) {
                return norm *
                       (std::exp(-(xi - x) * (xi - x) / a) - std::exp(-(xi + x) * (xi + x) / a)) *
                       cryptorates::erf(xi / std::sqrt(b));
            },
            spec);
        const double err = std::abs(res.value - cryptorates::erf(x / std::sqrt(a + b)));
        worst = std::max(worst, err);
        pass = pass && err <= 1e-9;
    }
    report(4, "martingale identity (quadrature)", pass, fmt("max |error| %.2g <= 1e-9", worst));
}

// 5. Put-call parity for both evaluation methods at three strikes.
void criterion_parity() {
    const auto curve = VolatilityCurve::constant(0.6);
    const double p0t = bond_price(kB4, unit_state4(), curve, 1.0);
    const double p0T = bond_price(kB4, unit_state4(), curve, 2.0);
    bool pass = true;
    double worst = 0.0;
    for (double K : {0.3, 0.5, 0.7}) {
        for (auto method : {Bessel4Method::series, Bessel4Method::quadrature}) {
            const auto call = bessel4_bond_call({1.0, 2.0, K, OptionKind::call}, curve, method);
            const auto put = bessel4_bond_put({1.0, 2.0, K, OptionKind::put}, curve, method);
            const double gap = std::abs(call.value - put.value - (p0T - K * p0t));
            worst = std::max(worst, gap);
            pass = pass && gap <= 1e-10;
        }
    }
    report(5, "put-call parity", pass, fmt("max |gap| %.2g <= 1e-10", worst));
}

// 6. Series (k_max = 20) vs quadrature agreement for the bond call.
void criterion_series_vs_quadrature() {
    const auto curve = VolatilityCurve::constant(0.6);
    bool pass = true;
    double worst = 0.0;
    for (double K : {0.3, 0.5, 0.7}) {
        const auto s = bessel4_bond_call({1.0, 2.0, K, OptionKind::call}, curve,
                                         Bessel4Method::series, 20);
        const auto q = bessel4_bond_call({1.0, 2.0, K, OptionKind::call}, curve,
                                         Bessel4Method::quadrature);
        const double gap = std::abs(s.value - q.value);
        worst = std::max(worst, gap);
        pass = pass && gap <= 1e-10;
    }
    report(6, "series vs quadrature", pass, fmt("max |gap| %.2g <= 1e-10", worst));
}

// 7. Calibration roundtrips recover sigma^2 = 0.36 from synthetic curves.
void criterion_calibration() {
    bool pass = true;
    double worst = 0.0;
    {
        const auto truth = VolatilityCurve::constant(0.6);
        std::vector<YieldPoint> quotes;
        for (double T : {0.5, 1.0, 2.0, 5.0}) quotes.push_back({T, initial_yield(kB3, truth, T)});
        const auto fitted = calibrate_bessel3(quotes);
        for (const auto& [t, sigma] : fitted.knots()) {
            worst = std::max(worst, std::abs(sigma * sigma - 0.36));
        }
    }
    {
        std::vector<YieldSample> samples;
        for (double T : {0.5, 1.0, 1.7, 3.0}) {
            const double y = initial_yield(kB4, VolatilityCurve::constant(0.6), T);
            const double e = std::exp(-1.0 / (0.72 * T));
            const double d_ty = e / (1.0 - e) / (0.72 * T * T);
            samples.push_back({T, y, (d_ty - y) / T});
        }
        for (double v : calibrate_bessel4(samples)) worst = std::max(worst, std::abs(v - 0.36));
    }
    pass = worst <= 1e-8;
    report(7, "calibration roundtrips", pass, fmt("max |sigma^2 - 0.36| = %.2g <= 1e-8", worst));
}

// 8. Yield curve shape: vanishes at the short end, single peak, decays, and
//    matches the small-argument asymptotic at T = 1e3 within 5%.
void criterion_yield_shape() {
    bool pass = true;
    std::string detail;
    for (double sigma : {0.3, 0.6, 0.9}) {
        const auto curve = VolatilityCurve::constant(sigma);
        pass = pass && std::abs(initial_yield(kB3, curve, 1e-8)) < 1e-10;
        std::vector<double> ys;
        for (double T = 0.05; T <= 50.0; T += 0.05) ys.push_back(initial_yield(kB3, curve, T));
        const auto peak = std::max_element(ys.begin(), ys.end());
        // Strictly rising into the peak once past the short-end region where
        // the yield underflows to exactly zero, strictly falling after it.
        auto it = ys.begin();
        while (it != peak && *it == 0.0) ++it;
        for (; it + 1 < peak; ++it) pass = pass && *it < *(it + 1);
        for (auto jt = peak; jt + 1 != ys.end(); ++jt) pass = pass && *jt > *(jt + 1);

        // Decays toward zero beyond the plotted range.
        const double y50 = ys.back();
        const double y1000 = initial_yield(kB3, curve, 1000.0);
        pass = pass && y50 < *peak && y1000 < y50;

        const double asym =
            -std::log(std::sqrt(2.0 / (3.14159265358979323846 * sigma * sigma * 1000.0))) / 1000.0;
        const double rel = std::abs(asym - y1000) / y1000;
        pass = pass && rel < 0.05;
        if (sigma == 0.9) detail = fmt("large-T relative gap %.2g < 0.05", rel);
    }
    report(8, "yield curve shape + asymptote", pass, detail);
}

// 9. Digital at K = 0 is the bond to expiry; zero-cap caplet matches the
//    bond spread; both agree with their Monte Carlo oracles.
void criterion_digital_caplet() {
    const auto curve = VolatilityCurve::constant(0.75);
    const Bessel3Params b3{};
    bool pass = true;
    std::string detail;

    const double p0t = bond_price(kB3, unit_state3(), curve, 1.0);
    const double p0T = bond_price(kB3, unit_state3(), curve, 2.0);

    const BondOptionSpec dig{1.0, 2.0, 0.0, OptionKind::digital_call};
    const double digital = digital_call_price(b3, unit_state3(), dig, curve);
    pass = pass && std::abs(digital - p0t) <= 1e-12;

    const CapletSpec zero_cap{1.0, 2.0, 0.0, 1.0};
    const double caplet0 = caplet_price(b3, zero_cap, curve).value;
    const double spread = (p0t - p0T) / 1.0;
    pass = pass && std::abs(caplet0 - spread) <= 1e-9;
    detail = fmt("digital gap %.2g, caplet gap %.2g", std::abs(digital - p0t),
                 std::abs(caplet0 - spread));

    const BondOptionSpec dig_mid{1.0, 2.0, 0.5, OptionKind::digital_call};
    const double dmid = digital_call_price(b3, unit_state3(), dig_mid, curve);
    const auto dig_mc = price_claim(
        kB3, curve,
        [&](const FactorState& s) { return bond_price(kB3, s, curve, 2.0) > 0.5 ? 1.0 : 0.0; },
        1.0, 100000);
    pass = pass && std::abs(dig_mc.mean - dmid) <= 3.0 * dig_mc.std_err;

    const CapletSpec cap{1.0, 2.0, 0.2, 1.0};
    const double capv = caplet_price(b3, cap, curve).value;
    const auto cap_mc = price_path_claim(
        kB3, curve,
        [&](const std::vector<FactorState>& path) {
            const double p = bond_price(kB3, path[0], curve, cap.payment);
            const double rate = simple_rate(p, cap.payment - cap.reset);
            return cap.notional * std::max(rate - cap.cap_rate, 0.0);
        },
        {cap.reset, cap.payment}, 200000);
    pass = pass && std::abs(cap_mc.mean - capv) <= 3.0 * cap_mc.std_err;

    report(9, "digital/caplet identities + MC", pass, detail);
}

// 10. The complexified bond price converges to the third-order one at rate
//     eps^2 as the imaginary center shrinks.
void criterion_complex_reduction() {
    const FactorState s{0.9, Eigen::Vector3d(0.2, -0.3, 1.1)};
    const Eigen::Vector3d delta0(0.4, 0.1, -0.2);
    const auto curve = VolatilityCurve::constant(1.0);
    const double T = s.time + 0.9;
    const double real_bond = bond_price(kB3, s, curve, T);
    const auto p2 = ComplexBessel3Params::normalized({0.0, 0.0, 1.0}, 1e-2 * delta0);
    const auto p4 = ComplexBessel3Params::normalized({0.0, 0.0, 1.0}, 1e-4 * delta0);
    const double e2 = std::abs(bond_price(KernelModel{p2}, s, curve, T) - real_bond);
    const double e4 = std::abs(bond_price(KernelModel{p4}, s, curve, T) - real_bond);
    const double ratio = e2 / e4;
    // Quadratic convergence means the error ratio is (1e-2/1e-4)^2 = 1e4,
    // checked within a factor of 4.
    const bool pass = ratio > 2.5e3 && ratio < 4e4;
    report(10, "complex-model reduction O(eps^2)", pass, fmt("error ratio %.3g ~ 1e4", ratio));
}

// 11. FX identities: zero-strike call prices the foreign bond, the
//     lambda = 0 crypto-USD call matches a joint Monte Carlo, and exchange
//     rates compose along triangles.
void criterion_fx() {
    bool pass = true;
    std::string detail;

    const double w = std::sqrt(0.5);
    auto loadings = [&](int idio_offset) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 12);
        for (int r = 0; r < 3; ++r) {
            m(r, r) = w;
            m(r, idio_offset + r) = w;
        }
        return m;
    };
    std::vector<Currency> ccys;
    ccys.push_back({"btc", Bessel3Params{}, VolatilityCurve::constant(0.75), loadings(3)});
    ccys.push_back({"eth", Bessel3Params{}, VolatilityCurve::constant(0.6), loadings(6)});
    ccys.push_back({"ltc", Bessel3Params{}, VolatilityCurve::constant(0.45), loadings(9)});
    const MultiCurrencyMarket market(ccys);

    for (const auto& [i, j] : {std::pair{std::string("btc"), std::string("eth")},
                               {std::string("eth"), std::string("ltc")},
                               {std::string("ltc"), std::string("btc")}}) {
        const auto quote = crypto_crypto_call_mc(market, i, j, 1.5, 0.0, 50000);
        const auto& ci = market.currencies()[market.index_of(i)];
        const double target = bond_price(ci.model, initial_state(ci.model), ci.curve, 1.5);
        const bool ok = std::abs(quote.value - target) <= 3.0 * quote.err_est;
        if (i == "btc") {
            detail = fmt("btc/eth z = %.2f", (quote.value - target) / quote.err_est);
        }
        pass = pass && ok;
    }

    // Triangle identity on sampled joint states.
    RngStream rng(kDefaultSeed, 77);
    for (int k = 0; k < 200; ++k) {
        const auto joint = sample_joint_terminal(market, 1.0, rng);
        const double lhs = exchange_rate(market, "btc", "ltc", joint);
        const double rhs = exchange_rate(market, "btc", "eth", joint) *
                           exchange_rate(market, "eth", "ltc", joint);
        pass = pass && std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs);
    }

    // lambda -> 0 crypto-USD call vs joint Monte Carlo.
    const Bessel3Params crypto{};
    const auto curve = VolatilityCurve::constant(0.75);
    const SovereignGbmParams usd{0.02, 0.0, 1.0};
    const auto formula = crypto_usd_call(crypto, curve, usd, 1.0, 1.0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream r(kDefaultSeed, 300000 + i);
        Eigen::Vector3d off(0.0, 0.0, -1.0);
        for (int c = 0; c < 3; ++c) off[c] += 0.75 * r.next_normal();
        const double pi_b = 1.0 / off.norm();
        const double pi_d = sovereign_kernel_value(usd, std::sqrt(1.0) * r.next_normal(), 1.0);
        const double v = std::max(pi_b - pi_d, 0.0);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    pass = pass && std::abs(mean - formula.value) <= 3.0 * se;

    report(11, "fx identities", pass, detail);
}

// 12. Discrete Laplacian of the third-order potential and of both parts of
//     the complexified potential stays below 1e-6 at step 1e-4.
void criterion_laplacian() {
    const double h = 1e-4;
    double worst = 0.0;
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(0.9, 2.5);

    const KernelModel b3 = Bessel3Params{};
    auto lap = [&](auto&& f, const Eigen::Vector3d& x) {
        double acc = 0.0;
        for (int axis = 0; axis < 3; ++axis) {
            Eigen::Vector3d e = Eigen::Vector3d::Zero();
            e[axis] = h;
            acc += f(x + e) + f(x - e);
        }
        return (acc - 6.0 * f(x)) / (h * h);
    };

    const auto cparams = ComplexBessel3Params::normalized({0.0, 0.0, 1.0}, {0.1, 0.15, 0.05});
    int count = 0;
    while (count < 100) {
        Eigen::Vector3d dir(unif(gen), unif(gen), unif(gen));
        if (dir.norm() < 1e-3) continue;
        const Eigen::Vector3d x = radius(gen) / dir.norm() * dir;
        // Keep the stencil clear of the complexified kernel's branch disk.
        if (std::abs(x.dot(cparams.center_im)) < 0.02) continue;
        ++count;
        worst = std::max(worst, std::abs(lap(
                                    [&](const Eigen::Vector3d& p) {
                                        return kernel_value(b3, {0.0, p});
                                    },
                                    x)));
        worst = std::max(worst, std::abs(lap(
                                    [&](const Eigen::Vector3d& p) {
                                        return complex_kernel(cparams, p).real();
                                    },
                                    x)));
        worst = std::max(worst, std::abs(lap(
                                    [&](const Eigen::Vector3d& p) {
                                        return complex_kernel(cparams, p).imag();
                                    },
                                    x)));
    }
    report(12, "discrete Laplacian of potentials", worst <= 1e-6,
           fmt("max |lap| %.3g <= 1e-6 at h = 1e-4", worst));
}

}  // namespace

int main() {
    std::printf("acceptance suite (fixed seed %llu)\n",
                static_cast<unsigned long long>(kDefaultSeed));
    criterion_short_rate();
    criterion_strictness();
    criterion_martingale();
    criterion_erf_identity();
    criterion_parity();
    criterion_series_vs_quadrature();
    criterion_calibration();
    criterion_yield_shape();
    criterion_digital_caplet();
    criterion_complex_reduction();
    criterion_fx();
    criterion_laplacian();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
