#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cryptorates/derivatives.hpp"
#include "cryptorates/kernels.hpp"
#include "cryptorates/mc.hpp"
#include "cryptorates/volatility.hpp"

namespace cryptorates {

/// One currency in a multi-currency crypto market. `loadings` maps each of
/// the kernel's driver components onto a shared pool of independent Brownian
/// factors: row j holds the pool weights of driver j. Rows must be unit norm
/// (each driver stays a standard time-changed Brownian motion) and mutually
/// orthogonal within a currency (the kernel's drivers stay independent).
/// Weight on a pool factor shared with other currencies is systematic risk;
/// weight on an exclusive factor is idiosyncratic.
struct Currency {
    std::string name;
    KernelModel model;
    VolatilityCurve curve;
    Eigen::MatrixXd loadings;
};

class MultiCurrencyMarket {
  public:
    explicit MultiCurrencyMarket(std::vector<Currency> currencies);

    const std::vector<Currency>& currencies() const { return currencies_; }
    Eigen::Index pool_size() const { return pool_size_; }

    /// Index of a currency by name; throws std::out_of_range for unknown
    /// names.
    std::size_t index_of(const std::string& name) const;

  private:
    std::vector<Currency> currencies_;
    Eigen::Index pool_size_ = 0;
};

/// Factor states of all currencies at a common time, aligned with the
/// market's currency order.
using JointState = std::vector<FactorState>;

/// Exchange rate S^{ij} = pi^i / pi^j: units of currency j per unit of i.
double exchange_rate(const MultiCurrencyMarket& market, const std::string& i,
                     const std::string& j, const JointState& joint);

/// Exact draw of all currencies' terminal states at T. Pool increments are
/// drawn once per merged volatility segment and distributed through the
/// loadings, so shared factors induce the exact cross-currency covariance.
JointState sample_joint_terminal(const MultiCurrencyMarket& market, double T, RngStream& rng);

/// Monte Carlo price, in units of currency j at time 0, of a call on the
/// exchange rate S^{ij} with payout (S_T^{ij} - K)^+ at T:
/// mean of (pi_T^i - K pi_T^j)^+ / pi_0^j over exact joint samples.
/// Singular joint samples are redrawn from the advanced stream; their count
/// is returned through `rejected_out` when given.
PriceQuote crypto_crypto_call_mc(const MultiCurrencyMarket& market, const std::string& i,
                                 const std::string& j, double T, double K,
                                 std::int64_t n_samples, const McConfig& cfg = {},
                                 std::int64_t* rejected_out = nullptr);

enum class CryptoUsdMethod { monte_carlo, radial_quadrature };

/// Dollar price of a call on one unit of the crypto currency at strike K:
/// C_0 = (1/pi_0^$) E[pi_T^B N(g+) - K e^{-rT} pi_0^$ N(g-)], with
/// g+- = (log(pi_T^B / (K pi_0^$)) + rT +- lambda^2 T / 2) / (lambda sqrt T).
/// The remaining expectation over the crypto kernel's terminal law is taken
/// either by Monte Carlo over exact 3-D samples or by a one-dimensional
/// radial quadrature. lambda = 0 falls back to the deterministic-dollar
/// payoff (pi_T^B - K pi_0^$ e^{-rT})^+; K = 0 is the sure claim on the
/// crypto kernel.
PriceQuote crypto_usd_call(const Bessel3Params& crypto, const VolatilityCurve& crypto_curve,
                           const SovereignGbmParams& usd, double T, double K,
                           CryptoUsdMethod method = CryptoUsdMethod::radial_quadrature,
                           std::int64_t n_samples = 100000, const McConfig& cfg = {},
                           const QuadratureSpec& quad = {});

}  // namespace cryptorates
