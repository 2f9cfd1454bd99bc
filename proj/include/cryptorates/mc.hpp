#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cryptorates/kernels.hpp"
#include "cryptorates/term_structure.hpp"
#include "cryptorates/volatility.hpp"

namespace cryptorates {

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t n_samples = 0;
    std::int64_t rejected_singular = 0;
};

/// Outcome of a statistical model check, serialized by the CLI as
/// {statistic, target, std_err, pass}.
struct CheckReport {
    std::string name;
    double statistic = 0.0;
    double target = 0.0;
    double std_err = 0.0;
    bool pass = false;
};

/// Monte Carlo configuration. Path i draws from RngStream(seed,
/// stream_base + i) — or stream_base + i/2 with antithetic pairing — so
/// estimates do not depend on how paths are chunked across workers.
struct McConfig {
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t stream_base = 0;
    /// Pair each even path with its sign-flipped twin. Unbiased, and
    /// variance-reducing for monotone payoffs.
    bool antithetic = false;
};

/// Value at time 0 of a claim paying payoff(state at t) at time t:
/// mean of kernel(terminal) * payoff(terminal) / pi_0 over exact terminal
/// samples, with its standard error. Samples landing on the singular set are
/// redrawn from the same stream and counted.
McEstimate price_claim(const KernelModel& model, const VolatilityCurve& curve,
                       const std::function<double(const FactorState&)>& payoff, double t,
                       std::int64_t n_samples, const McConfig& cfg = {});

/// Same, for claims that need the state at several dates (grid increasing):
/// pays payoff(states along grid) at grid.back().
McEstimate price_path_claim(const KernelModel& model, const VolatilityCurve& curve,
                            const std::function<double(const std::vector<FactorState>&)>& payoff,
                            const std::vector<double>& grid, std::int64_t n_samples,
                            const McConfig& cfg = {});

/// Tower-property check: the sampled mean of pi_t P_{tT} must equal the
/// closed-form P_{0T} within 3 standard errors.
CheckReport martingale_test(const KernelModel& model, const VolatilityCurve& curve, double T_outer,
                            double t_inner, std::int64_t n_samples, const McConfig& cfg = {});

/// Strict-local-martingale check: the sampled mean of pi_t must match the
/// closed-form pi_0 P_{0t} within 3 standard errors AND sit below pi_0 by
/// more than 3 standard errors.
CheckReport strictness_test(const KernelModel& model, const VolatilityCurve& curve, double t,
                            std::int64_t n_samples, const McConfig& cfg = {});

namespace detail {

/// Order-independent pairwise sum, so accumulation over path-indexed values
/// is deterministic no matter how the index range was produced.
double pairwise_sum(const std::vector<double>& values);

}  // namespace detail

}  // namespace cryptorates
