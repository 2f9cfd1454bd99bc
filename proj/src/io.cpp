#include "cryptorates/io.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cryptorates {

using nlohmann::json;

namespace {

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Eigen::Vector3d vector3_from_json(const json& j) {
    if (j.size() != 3) throw std::domain_error("io: expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vector_to_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

}  // namespace

json to_json(const VolatilityCurve& curve) {
    json knots = json::array();
    for (const auto& [t, s] : curve.knots()) knots.push_back(json::array({t, s}));
    return json{{"knots", knots}};
}

VolatilityCurve volatility_curve_from_json(const json& j) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& kv : j.at("knots")) {
        knots.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
    }
    return VolatilityCurve(std::move(knots));
}

json to_json(const KernelModel& model) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Bessel3Params>) {
                return json{{"model", "bessel3"}, {"center", vector_to_json(p.center)}};
            } else if constexpr (std::is_same_v<T, BesselNParams>) {
                if (p.order == 4) {
                    return json{{"model", "bessel4"}, {"center", vector_to_json(p.center)}};
                }
                return json{{"model", "bessel-n"},
                            {"order", p.order},
                            {"center", vector_to_json(p.center)}};
            } else {
                return json{{"model", "complex-bessel3"},
                            {"center_re", vector_to_json(p.center_re)},
                            {"center_im", vector_to_json(p.center_im)}};
            }
        },
        model);
}

KernelModel kernel_model_from_json(const json& j) {
    const std::string tag = j.at("model").get<std::string>();
    if (tag == "bessel3") return Bessel3Params(vector3_from_json(j.at("center")));
    if (tag == "bessel4") return BesselNParams(4, vector_from_json(j.at("center")));
    if (tag == "bessel-n") {
        return BesselNParams(j.at("order").get<int>(), vector_from_json(j.at("center")));
    }
    if (tag == "complex-bessel3") {
        return ComplexBessel3Params(vector3_from_json(j.at("center_re")),
                                    vector3_from_json(j.at("center_im")));
    }
    throw std::domain_error("io: unknown model tag '" + tag + "'");
}

json to_json(const SovereignGbmParams& params) {
    return json{{"model", "sovereign-gbm"},
                {"short_rate", params.short_rate},
                {"risk_premium", params.risk_premium},
                {"initial", params.initial_kernel}};
}

SovereignGbmParams sovereign_from_json(const json& j) {
    SovereignGbmParams p;
    p.short_rate = j.at("short_rate").get<double>();
    p.risk_premium = j.at("risk_premium").get<double>();
    p.initial_kernel = j.value("initial", 1.0);
    if (p.risk_premium < 0.0) throw std::domain_error("io: risk premium must be >= 0");
    if (!(p.initial_kernel > 0.0)) throw std::domain_error("io: initial kernel must be positive");
    return p;
}

json to_json(const PriceQuote& quote) {
    return json{{"value", quote.value}, {"method", to_string(quote.method)}, {"err_est", quote.err_est}};
}

json to_json(const CheckReport& report) {
    return json{{"name", report.name},
                {"statistic", report.statistic},
                {"target", report.target},
                {"std_err", report.std_err},
                {"pass", report.pass}};
}

json to_json(const MultiCurrencyMarket& market) {
    json currencies = json::array();
    for (const auto& ccy : market.currencies()) {
        json loadings = json::array();
        for (Eigen::Index r = 0; r < ccy.loadings.rows(); ++r) {
            loadings.push_back(vector_to_json(ccy.loadings.row(r)));
        }
        currencies.push_back(json{{"name", ccy.name},
                                  {"model", to_json(ccy.model)},
                                  {"vol", to_json(ccy.curve)},
                                  {"loadings", loadings}});
    }
    return json{{"currencies", currencies}};
}

MultiCurrencyMarket market_from_json(const json& j) {
    std::vector<Currency> currencies;
    for (const auto& cj : j.at("currencies")) {
        const auto& lj = cj.at("loadings");
        if (lj.empty()) throw std::domain_error("io: empty loadings");
        Eigen::MatrixXd loadings(lj.size(), lj[0].size());
        for (std::size_t r = 0; r < lj.size(); ++r) {
            if (lj[r].size() != lj[0].size()) throw std::domain_error("io: ragged loadings");
            for (std::size_t c = 0; c < lj[r].size(); ++c) {
                loadings(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    lj[r][c].get<double>();
            }
        }
        currencies.push_back(Currency{cj.at("name").get<std::string>(),
                                      kernel_model_from_json(cj.at("model")),
                                      volatility_curve_from_json(cj.at("vol")), loadings});
    }
    return MultiCurrencyMarket(std::move(currencies));
}

std::vector<YieldPoint> yield_points_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::domain_error("csv: empty input");
    // Tolerate surrounding whitespace and an optional \r.
    auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (strip(line) != "maturity,yield") {
        throw std::domain_error("csv: expected header 'maturity,yield'");
    }
    std::vector<YieldPoint> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        const auto comma = s.find(',');
        if (comma == std::string::npos) {
            throw std::domain_error("csv: malformed line " + std::to_string(lineno));
        }
        try {
            points.push_back(
                {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
        } catch (const std::exception&) {
            throw std::domain_error("csv: malformed line " + std::to_string(lineno));
        }
    }
    return points;
}

std::string yield_points_to_csv(const std::vector<YieldPoint>& points) {
    std::ostringstream out;
    out.precision(17);
    out << "maturity,yield\n";
    for (const auto& p : points) out << p.maturity << "," << p.yield << "\n";
    return out.str();
}

}  // namespace cryptorates
