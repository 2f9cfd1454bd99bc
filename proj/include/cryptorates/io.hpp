#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cryptorates/derivatives.hpp"
#include "cryptorates/fx.hpp"
#include "cryptorates/kernels.hpp"
#include "cryptorates/mc.hpp"
#include "cryptorates/term_structure.hpp"
#include "cryptorates/volatility.hpp"

namespace cryptorates {

// JSON wire formats:
//   VolatilityCurve   {"knots": [[t, sigma], ...]}
//   KernelModel       {"model": "bessel3", "center": [a, b, c]}
//                     {"model": "bessel4", "center": [a, b, c, d]}
//                     {"model": "bessel-n", "order": n, "center": [...]}
//                     {"model": "complex-bessel3", "center_re": [...], "center_im": [...]}
//   SovereignGbm      {"model": "sovereign-gbm", "short_rate": r,
//                      "risk_premium": lambda, "initial": pi0}
//   PriceQuote        {"value": v, "method": "series", "err_est": e}
//   Market            {"currencies": [{"name": ..., "model": ..., "vol": ...,
//                      "loadings": [[...], ...]}, ...]}
//   CheckReport       {"statistic": s, "target": t, "std_err": e, "pass": b}

nlohmann::json to_json(const VolatilityCurve& curve);
VolatilityCurve volatility_curve_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KernelModel& model);
KernelModel kernel_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SovereignGbmParams& params);
SovereignGbmParams sovereign_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PriceQuote& quote);

nlohmann::json to_json(const CheckReport& report);

nlohmann::json to_json(const MultiCurrencyMarket& market);
MultiCurrencyMarket market_from_json(const nlohmann::json& j);

/// Parse "maturity,yield" CSV text (header required) into sorted quotes.
std::vector<YieldPoint> yield_points_from_csv(const std::string& text);

/// Render yield points back to "maturity,yield" CSV.
std::string yield_points_to_csv(const std::vector<YieldPoint>& points);

}  // namespace cryptorates
