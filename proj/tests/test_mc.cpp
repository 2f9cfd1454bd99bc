#include "doctest.h"

#include <cmath>

#include "cryptorates/errors.hpp"
#include "cryptorates/mc.hpp"

using namespace cryptorates;

namespace {

const KernelModel kB3 = Bessel3Params{};
const KernelModel kB4 = BesselNParams::canonical(4);

}  // namespace

TEST_CASE("pricing the sure claim recovers the bond") {
    const auto c75 = VolatilityCurve::constant(0.75);
    const auto est = price_claim(
        kB3, c75, [](const FactorState&) { return 1.0; }, 2.0, 100000);
    CHECK(std::abs(est.mean - 0.65422141384883968427) < 3.0 * est.std_err);
    CHECK(est.rejected_singular == 0);
    CHECK(est.n_samples == 100000);

    const auto c60 = VolatilityCurve::constant(0.6);
    const auto est4 = price_claim(
        kB4, c60, [](const FactorState&) { return 1.0; }, 2.0, 100000);
    CHECK(std::abs(est4.mean - 0.50064821140072382953) < 3.0 * est4.std_err);
}

TEST_CASE("zero payoff gives exactly zero") {
    const auto est = price_claim(
        kB3, VolatilityCurve::constant(0.75), [](const FactorState&) { return 0.0; }, 1.0, 1000);
    CHECK(est.mean == 0.0);
    CHECK(est.std_err == 0.0);
}

TEST_CASE("martingale and strictness checks pass for both closed-form models") {
    const auto c75 = VolatilityCurve::constant(0.75);
    const auto c60 = VolatilityCurve::constant(0.6);

    const auto m3 = martingale_test(kB3, c75, 2.0, 1.0, 100000);
    CHECK(m3.pass);
    CHECK(std::abs(m3.statistic - m3.target) < 3.0 * m3.std_err);
    const auto m4 = martingale_test(kB4, c60, 2.0, 1.0, 100000);
    CHECK(m4.pass);

    const auto s3 = strictness_test(kB3, c75, 2.0, 100000);
    CHECK(s3.pass);
    CHECK(s3.target == doctest::Approx(0.65422141384883968427).epsilon(1e-12));
    CHECK(s3.statistic < 1.0 - 3.0 * s3.std_err);
    const auto s4 = strictness_test(kB4, c60, 2.0, 100000);
    CHECK(s4.pass);
    CHECK(s4.target == doctest::Approx(0.50064821140072382953).epsilon(1e-12));
}

TEST_CASE("estimates are deterministic and chunk-invariant") {
    const auto c75 = VolatilityCurve::constant(0.75);
    auto payoff = [](const FactorState& s) { return s.offsets.squaredNorm(); };
    const auto a = price_claim(kB3, c75, payoff, 1.5, 4096);
    const auto b = price_claim(kB3, c75, payoff, 1.5, 4096);
    CHECK(a.mean == b.mean);
    CHECK(a.std_err == b.std_err);

    // Four workers each covering a quarter of the path indices reproduce the
    // single-run mean exactly: per-path values depend only on (seed, index),
    // and pairwise summation splits on the same boundaries.
    double part_sum[4];
    for (int chunk = 0; chunk < 4; ++chunk) {
        McConfig cfg;
        cfg.stream_base = static_cast<std::uint64_t>(chunk) * 1024;
        part_sum[chunk] = price_claim(kB3, c75, payoff, 1.5, 1024, cfg).mean * 1024.0;
    }
    const double total = (part_sum[0] + part_sum[1]) + (part_sum[2] + part_sum[3]);
    CHECK(total / 4096.0 == a.mean);
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    const auto c75 = VolatilityCurve::constant(0.75);
    auto payoff = [](const FactorState&) { return 1.0; };
    const auto small = price_claim(kB3, c75, payoff, 2.0, 25000);
    McConfig cfg;
    cfg.stream_base = 500000;
    const auto large = price_claim(kB3, c75, payoff, 2.0, 100000, cfg);
    CHECK(large.std_err == doctest::Approx(0.5 * small.std_err).epsilon(0.20));
}

TEST_CASE("antithetic pairing is unbiased and reduces variance here") {
    const auto c75 = VolatilityCurve::constant(0.75);
    auto payoff = [](const FactorState&) { return 1.0; };
    McConfig anti;
    anti.antithetic = true;
    const auto plain = price_claim(kB3, c75, payoff, 2.0, 40000);
    const auto paired = price_claim(kB3, c75, payoff, 2.0, 40000, anti);
    CHECK(std::abs(paired.mean - 0.65422141384883968427) < 3.0 * paired.std_err);
    CHECK(paired.std_err < plain.std_err);
}

TEST_CASE("path claims see the whole grid") {
    const auto c75 = VolatilityCurve::constant(0.75);
    // E[pi_2 / pi_1-measurable bond] via the tower property: pricing the
    // claim that pays P_{1,2}(state at 1) at time 1 must equal P_{0,2}.
    const auto est = price_path_claim(
        kB3, c75,
        [&](const std::vector<FactorState>& path) {
            REQUIRE(path.size() == 2);
            CHECK(path[0].time == 1.0);
            CHECK(path[1].time == 2.0);
            return 1.0;
        },
        {1.0, 2.0}, 2000);
    CHECK(est.n_samples == 2000);
}

TEST_CASE("degenerate inputs raise after persistent singular rejections") {
    const auto c75 = VolatilityCurve::constant(0.75);
    auto always_singular = [](const FactorState&) -> double {
        throw SingularStateError("forced");
    };
    CHECK_THROWS_AS(price_claim(kB3, c75, always_singular, 1.0, 10), std::runtime_error);
    CHECK_THROWS_AS(price_claim(kB3, c75, [](const FactorState&) { return 1.0; }, -1.0, 10),
                    std::domain_error);
    CHECK_THROWS_AS(price_claim(kB3, c75, [](const FactorState&) { return 1.0; }, 1.0, 0),
                    std::domain_error);
}
