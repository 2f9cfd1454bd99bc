#include "cryptorates/mc.hpp"

#include <cmath>
#include <stdexcept>

#include "cryptorates/errors.hpp"

namespace cryptorates {

namespace detail {

double pairwise_sum(const std::vector<double>& values) {
    // Recursive halving keeps rounding small and the result independent of
    // how the values were produced or chunked.
    struct Rec {
        static double sum(const double* v, std::size_t n) {
            if (n <= 16) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += v[i];
                return s;
            }
            const std::size_t half = n / 2;
            return sum(v, half) + sum(v + half, n - half);
        }
    };
    return Rec::sum(values.data(), values.size());
}

}  // namespace detail

namespace {

McEstimate summarize(std::vector<double>& values, std::int64_t rejected) {
    const auto n = static_cast<std::int64_t>(values.size());
    const double mean = detail::pairwise_sum(values) / static_cast<double>(n);
    for (double& v : values) {
        const double d = v - mean;
        v = d * d;
    }
    const double var = n > 1 ? detail::pairwise_sum(values) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), n, rejected};
}

}  // namespace

McEstimate price_path_claim(const KernelModel& model, const VolatilityCurve& curve,
                            const std::function<double(const std::vector<FactorState>&)>& payoff,
                            const std::vector<double>& grid, std::int64_t n_samples,
                            const McConfig& cfg) {
    if (n_samples < 1) throw std::domain_error("mc: n_samples must be >= 1");
    if (cfg.antithetic && n_samples % 2 != 0) {
        throw std::domain_error("mc: antithetic sampling needs an even sample count");
    }
    if (grid.empty() || !(grid.front() > 0.0)) throw std::domain_error("mc: grid must start after 0");

    const FactorState start = initial_state(model);
    const double pi0 = kernel_value(model, start);
    const auto draws_per_attempt = static_cast<std::uint64_t>(grid.size()) *
                                   static_cast<std::uint64_t>(start.offsets.size());

    std::vector<double> values(static_cast<std::size_t>(n_samples));
    std::int64_t rejected = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const std::uint64_t stream =
            cfg.stream_base + (cfg.antithetic ? static_cast<std::uint64_t>(i) / 2
                                              : static_cast<std::uint64_t>(i));
        const double sign = (cfg.antithetic && (i % 2 == 1)) ? -1.0 : 1.0;
        bool done = false;
        for (int attempt = 0; attempt < 100 && !done; ++attempt) {
            RngStream rng(cfg.seed, stream);
            for (std::uint64_t skip = 0; skip < draws_per_attempt * attempt; ++skip) {
                rng.next_uniform();
            }
            try {
                std::vector<FactorState> path;
                path.reserve(grid.size());
                FactorState prev = start;
                for (double t : grid) {
                    const double variance = accumulated_variance(curve, prev.time, t);
                    const double sd = std::sqrt(variance);
                    FactorState next{t, prev.offsets};
                    for (Eigen::Index c = 0; c < next.offsets.size(); ++c) {
                        next.offsets[c] += sd * sign * rng.next_normal();
                    }
                    path.push_back(next);
                    prev = path.back();
                }
                const double deflator = kernel_value(model, path.back());
                values[static_cast<std::size_t>(i)] = deflator * payoff(path) / pi0;
                done = true;
            } catch (const SingularStateError&) {
                ++rejected;
            }
        }
        if (!done) {
            throw std::runtime_error("mc: degenerate input, samples keep hitting the singular set");
        }
    }
    if (cfg.antithetic) {
        // A pair is one (dependent) observation; collapse before computing
        // the standard error.
        std::vector<double> pairs(values.size() / 2);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            pairs[i] = 0.5 * (values[2 * i] + values[2 * i + 1]);
        }
        McEstimate est = summarize(pairs, rejected);
        est.n_samples = n_samples;
        return est;
    }
    return summarize(values, rejected);
}

McEstimate price_claim(const KernelModel& model, const VolatilityCurve& curve,
                       const std::function<double(const FactorState&)>& payoff, double t,
                       std::int64_t n_samples, const McConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("mc: claim date must be positive");
    return price_path_claim(
        model, curve,
        [&payoff](const std::vector<FactorState>& path) { return payoff(path.back()); }, {t},
        n_samples, cfg);
}

CheckReport martingale_test(const KernelModel& model, const VolatilityCurve& curve, double T_outer,
                            double t_inner, std::int64_t n_samples, const McConfig& cfg) {
    if (!(0.0 < t_inner) || !(t_inner < T_outer)) {
        throw std::domain_error("martingale_test: requires 0 < t_inner < T_outer");
    }
    const auto est = price_claim(
        model, curve,
        [&](const FactorState& s) { return bond_price(model, s, curve, T_outer); }, t_inner,
        n_samples, cfg);
    const double target = bond_price(model, initial_state(model), curve, T_outer);
    CheckReport rep;
    rep.name = "deflated-bond-martingale";
    rep.statistic = est.mean;
    rep.target = target;
    rep.std_err = est.std_err;
    rep.pass = std::abs(est.mean - target) <= 3.0 * est.std_err && est.rejected_singular <= 10;
    return rep;
}

CheckReport strictness_test(const KernelModel& model, const VolatilityCurve& curve, double t,
                            std::int64_t n_samples, const McConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("strictness_test: requires t > 0");
    const auto est = price_claim(
        model, curve, [](const FactorState&) { return 1.0; }, t, n_samples, cfg);
    const double target = bond_price(model, initial_state(model), curve, t);
    CheckReport rep;
    rep.name = "supermartingale-strictness";
    rep.statistic = est.mean;
    rep.target = target;
    rep.std_err = est.std_err;
    const bool matches_closed_form = std::abs(est.mean - target) <= 3.0 * est.std_err;
    const bool strictly_below_initial = est.mean < 1.0 - 3.0 * est.std_err;
    rep.pass = matches_closed_form && strictly_below_initial && est.rejected_singular <= 10;
    return rep;
}

}  // namespace cryptorates
