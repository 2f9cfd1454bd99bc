#include "cryptorates/factors.hpp"

#include <cmath>
#include <stdexcept>

#include "cryptorates/special_functions.hpp"

namespace cryptorates {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id * 0x9e3779b97f4a7c15ULL + 1))) {}

double RngStream::next_uniform() {
    // Center the 53-bit lattice so the endpoints 0 and 1 cannot occur.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    return 1.41421356237309504880 * erf_inv(2.0 * next_uniform() - 1.0);
}

FactorState sample_terminal(const VolatilityCurve& curve, const FactorState& state, double T,
                            RngStream& rng) {
    if (T < state.time) throw std::domain_error("sample_terminal: T must be >= state.time");
    const double variance = accumulated_variance(curve, state.time, T);
    FactorState out{T, state.offsets};
    if (variance == 0.0) return out;
    const double sd = std::sqrt(variance);
    for (Eigen::Index i = 0; i < out.offsets.size(); ++i) out.offsets[i] += sd * rng.next_normal();
    return out;
}

std::vector<FactorState> simulate_grid(const VolatilityCurve& curve, const FactorState& initial,
                                       const std::vector<double>& grid, RngStream& rng) {
    std::vector<FactorState> path;
    path.reserve(grid.size());
    const FactorState* prev = &initial;
    double prev_time = initial.time;
    for (double t : grid) {
        if (t < prev_time) throw std::domain_error("simulate_grid: grid must be non-decreasing and start at or after the initial time");
        path.push_back(sample_terminal(curve, *prev, t, rng));
        prev = &path.back();
        prev_time = t;
    }
    return path;
}

}  // namespace cryptorates
