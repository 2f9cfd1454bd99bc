#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "cryptorates/volatility.hpp"

namespace cryptorates {

/// Seed used by the CLI and test fixtures when none is given.
inline constexpr std::uint64_t kDefaultSeed = 20200815;

/// Gaussian driver vector at a point in time, stored as offsets from the
/// kernel's center: (X_t^1 - center_1, ..., X_t^n - center_n).
struct FactorState {
    double time = 0.0;
    Eigen::VectorXd offsets;
};

/// Deterministic stream of standard normals keyed by (seed, stream_id).
/// The same pair reproduces the same sequence on any platform: draws come
/// from mt19937_64 mapped through the inverse error function, so no
/// implementation-defined distribution is involved. Monte Carlo code assigns
/// stream_id = path index, which makes results independent of how paths are
/// chunked across workers.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    /// Uniform draw in (0, 1), 53-bit resolution, never exactly 0 or 1.
    double next_uniform();

    /// Standard normal via sqrt(2) * erf_inv(2u - 1).
    double next_normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Draw the terminal state at time T >= state.time exactly: each offset
/// component gets an independent N(0, Sigma_{state.time, T}) increment.
/// The factors are time-changed Brownian motions, so there is no
/// discretization error at any horizon.
FactorState sample_terminal(const VolatilityCurve& curve, const FactorState& state, double T,
                            RngStream& rng);

/// Sequential exact sampling over an increasing time grid.
std::vector<FactorState> simulate_grid(const VolatilityCurve& curve, const FactorState& initial,
                                       const std::vector<double>& grid, RngStream& rng);

}  // namespace cryptorates
