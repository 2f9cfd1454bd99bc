#include "cryptorates/fx.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cryptorates/errors.hpp"
#include "cryptorates/special_functions.hpp"

namespace cryptorates {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

// Merged segment boundaries of all currencies' volatility knots on [0, T].
std::vector<double> merged_cuts(const MultiCurrencyMarket& market, double T) {
    std::set<double> cuts{0.0, T};
    for (const auto& ccy : market.currencies()) {
        for (const auto& [t, s] : ccy.curve.knots()) {
            if (t > 0.0 && t < T) cuts.insert(t);
        }
    }
    return {cuts.begin(), cuts.end()};
}

JointState joint_initial(const MultiCurrencyMarket& market) {
    JointState joint;
    joint.reserve(market.currencies().size());
    for (const auto& ccy : market.currencies()) joint.push_back(initial_state(ccy.model));
    return joint;
}

// One joint terminal draw over the precomputed segment cuts.
JointState advance_joint(const MultiCurrencyMarket& market, const std::vector<double>& cuts,
                         RngStream& rng) {
    JointState joint = joint_initial(market);
    const Eigen::Index pool = market.pool_size();
    Eigen::VectorXd pool_increment(pool);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double lo = cuts[seg];
        const double hi = cuts[seg + 1];
        const double sd = std::sqrt(hi - lo);
        for (Eigen::Index m = 0; m < pool; ++m) pool_increment[m] = sd * rng.next_normal();
        for (std::size_t c = 0; c < joint.size(); ++c) {
            const auto& ccy = market.currencies()[c];
            const double sigma = ccy.curve.sigma(lo);
            joint[c].offsets += sigma * (ccy.loadings * pool_increment);
        }
    }
    const double T = cuts.back();
    for (auto& st : joint) st.time = T;
    return joint;
}

double safe_normal_cdf(double x) {
    if (x > 40.0) return 1.0;
    if (x < -40.0) return 0.0;
    return normal_cdf(x);
}

}  // namespace

MultiCurrencyMarket::MultiCurrencyMarket(std::vector<Currency> currencies)
    : currencies_(std::move(currencies)) {
    if (currencies_.empty()) throw std::domain_error("market: needs at least one currency");
    std::set<std::string> names;
    for (const auto& ccy : currencies_) {
        if (ccy.name.empty()) throw std::domain_error("market: empty currency name");
        if (!names.insert(ccy.name).second) {
            throw std::domain_error("market: duplicate currency name '" + ccy.name + "'");
        }
        const Eigen::Index dim = model_dimension(ccy.model);
        if (ccy.loadings.rows() != dim) {
            throw std::domain_error("market: loadings of '" + ccy.name +
                                    "' must have one row per kernel driver");
        }
        if (pool_size_ == 0) pool_size_ = ccy.loadings.cols();
        if (ccy.loadings.cols() != pool_size_) {
            throw std::domain_error("market: all loadings must span the same factor pool");
        }
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (std::abs(ccy.loadings.row(r).norm() - 1.0) > 1e-9) {
                throw std::domain_error("market: loading rows must be unit norm ('" + ccy.name + "')");
            }
            for (Eigen::Index r2 = r + 1; r2 < dim; ++r2) {
                if (std::abs(ccy.loadings.row(r).dot(ccy.loadings.row(r2))) > 1e-9) {
                    throw std::domain_error(
                        "market: loading rows within a currency must be orthogonal ('" + ccy.name +
                        "')");
                }
            }
        }
    }
}

std::size_t MultiCurrencyMarket::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < currencies_.size(); ++i) {
        if (currencies_[i].name == name) return i;
    }
    throw std::out_of_range("market: unknown currency '" + name + "'");
}

double exchange_rate(const MultiCurrencyMarket& market, const std::string& i,
                     const std::string& j, const JointState& joint) {
    if (joint.size() != market.currencies().size()) {
        throw std::domain_error("exchange_rate: joint state size does not match market");
    }
    const std::size_t ii = market.index_of(i);
    const std::size_t jj = market.index_of(j);
    const double pi_i = kernel_value(market.currencies()[ii].model, joint[ii]);
    const double pi_j = kernel_value(market.currencies()[jj].model, joint[jj]);
    return pi_i / pi_j;
}

JointState sample_joint_terminal(const MultiCurrencyMarket& market, double T, RngStream& rng) {
    if (!(T >= 0.0)) throw std::domain_error("sample_joint_terminal: negative horizon");
    if (T == 0.0) return joint_initial(market);
    return advance_joint(market, merged_cuts(market, T), rng);
}

PriceQuote crypto_crypto_call_mc(const MultiCurrencyMarket& market, const std::string& i,
                                 const std::string& j, double T, double K,
                                 std::int64_t n_samples, const McConfig& cfg,
                                 std::int64_t* rejected_out) {
    if (n_samples < 1) throw std::domain_error("crypto_crypto_call_mc: n_samples must be >= 1");
    if (!(T > 0.0)) throw std::domain_error("crypto_crypto_call_mc: maturity must be positive");
    if (K < 0.0) throw std::domain_error("crypto_crypto_call_mc: negative strike");
    const std::size_t ii = market.index_of(i);
    const std::size_t jj = market.index_of(j);
    const auto cuts = merged_cuts(market, T);
    const double pi0_j = kernel_value(market.currencies()[jj].model,
                                      initial_state(market.currencies()[jj].model));

    const std::uint64_t draws_per_attempt =
        static_cast<std::uint64_t>(cuts.size() - 1) * static_cast<std::uint64_t>(market.pool_size());

    std::vector<double> values(static_cast<std::size_t>(n_samples));
    std::int64_t rejected = 0;
    for (std::int64_t p = 0; p < n_samples; ++p) {
        bool done = false;
        for (int attempt = 0; attempt < 100 && !done; ++attempt) {
            RngStream rng(cfg.seed, cfg.stream_base + static_cast<std::uint64_t>(p));
            for (std::uint64_t skip = 0; skip < draws_per_attempt * attempt; ++skip) {
                rng.next_uniform();
            }
            try {
                const JointState joint = advance_joint(market, cuts, rng);
                const double pi_i = kernel_value(market.currencies()[ii].model, joint[ii]);
                const double pi_j = kernel_value(market.currencies()[jj].model, joint[jj]);
                values[static_cast<std::size_t>(p)] = std::max(pi_i - K * pi_j, 0.0) / pi0_j;
                done = true;
            } catch (const SingularStateError&) {
                ++rejected;
            }
        }
        if (!done) {
            throw std::runtime_error("crypto_crypto_call_mc: samples keep hitting the singular set");
        }
    }
    const double mean = detail::pairwise_sum(values) / static_cast<double>(n_samples);
    for (double& v : values) {
        const double d = v - mean;
        v = d * d;
    }
    const double var = n_samples > 1
                           ? detail::pairwise_sum(values) / static_cast<double>(n_samples - 1)
                           : 0.0;
    if (rejected_out != nullptr) *rejected_out = rejected;
    return {mean, PricingMethod::monte_carlo, std::sqrt(var / static_cast<double>(n_samples))};
}

PriceQuote crypto_usd_call(const Bessel3Params& crypto, const VolatilityCurve& crypto_curve,
                           const SovereignGbmParams& usd, double T, double K,
                           CryptoUsdMethod method, std::int64_t n_samples, const McConfig& cfg,
                           const QuadratureSpec& quad) {
    if (!(T > 0.0)) throw std::domain_error("crypto_usd_call: maturity must be positive");
    if (K < 0.0) throw std::domain_error("crypto_usd_call: negative strike");
    const KernelModel model{crypto};
    const FactorState start = initial_state(model);
    const double pi0_b = kernel_value(model, start);
    const double pi0_d = usd.initial_kernel;
    const double r = usd.short_rate;
    const double lambda = usd.risk_premium;

    if (K == 0.0) {
        // Sure claim on the crypto kernel: C_0 = pi_0^B P^B_{0T} / pi_0^$.
        const double bond = bond_price(model, start, crypto_curve, T);
        return {pi0_b * bond / pi0_d, PricingMethod::closed_form, 0.0};
    }

    const double vol_sqrt_t = lambda * std::sqrt(T);
    const bool deterministic_dollar = vol_sqrt_t < 1e-12;
    const double df = std::exp(-r * T);

    // Dollar value per unit dollar kernel, conditional on the crypto kernel.
    auto conditional_value = [&](double pi_b) {
        if (deterministic_dollar) return std::max(pi_b - K * pi0_d * df, 0.0) / pi0_d;
        const double log_moneyness = std::log(pi_b) - std::log(K * pi0_d);
        const double g_plus = (log_moneyness + r * T + 0.5 * lambda * lambda * T) / vol_sqrt_t;
        const double g_minus = g_plus - vol_sqrt_t;
        return (pi_b * safe_normal_cdf(g_plus) - K * df * pi0_d * safe_normal_cdf(g_minus)) / pi0_d;
    };

    if (method == CryptoUsdMethod::monte_carlo) {
        const auto est = price_claim(
            model, crypto_curve,
            [&](const FactorState& s) {
                // price_claim supplies the pi_T / pi_0^B deflator; the claim
                // here is valued per unit of dollar kernel instead, so undo
                // that and apply the conditional dollar formula directly.
                const double pi_b = kernel_value(model, s);
                return conditional_value(pi_b) * pi0_b / pi_b;
            },
            T, n_samples, cfg);
        return {est.mean, PricingMethod::monte_carlo, est.std_err};
    }

    // Radial reduction: the terminal crypto radius xi_T has density
    //   f(R) = R (e^{-(R-xi0)^2/2S} - e^{-(R+xi0)^2/2S}) / (xi0 sqrt(2 pi S)),
    // and pi_T^B = 1/R.
    const double variance = accumulated_variance(crypto_curve, 0.0, T);
    const double xi0 = start.offsets.norm();
    const double norm = 1.0 / (xi0 * kSqrt2Pi * std::sqrt(variance));
    auto integrand = [&](double R) {
        const double gauss = std::exp(-(R - xi0) * (R - xi0) / (2.0 * variance)) -
                             std::exp(-(R + xi0) * (R + xi0) / (2.0 * variance));
        return conditional_value(1.0 / R) * R * norm * gauss;
    };
    QuadratureSpec q = quad;
    q.lower = 0.0;
    q.upper = xi0 + 13.0 * std::sqrt(variance);
    q.half_line = false;
    if (deterministic_dollar) {
        // Payoff vanishes beyond the exercise radius; end the interval there
        // to keep the integrand smooth.
        q.upper = std::min(q.upper, 1.0 / (K * pi0_d * df));
    }
    const auto res = integrate(integrand, q);
    return {res.value, PricingMethod::quadrature, res.err_est};
}

}  // namespace cryptorates
