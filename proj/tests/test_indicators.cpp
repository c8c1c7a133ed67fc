#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cumret/indicators.hpp"
#include "support/oracles.hpp"

using namespace cumret;
using testing::close_rel;

namespace {

void check_against(const IndicatorSeries& got, const std::vector<double>& want, double tol = 1e-10)
{
    REQUIRE(got.size() == want.size());
    for (std::size_t t = 0; t < want.size(); ++t) {
        if (std::isnan(want[t])) {
            REQUIRE_FALSE(got.defined(t));
            continue;
        }
        REQUIRE(got.defined(t));
        INFO(got.name(), " t=", t, " got=", got.at(t), " want=", want[t]);
        REQUIRE(close_rel(got.at(t), want[t], tol));
    }
}

std::vector<double> constant(double c, std::size_t n)
{
    return std::vector<double>(n, c);
}

}  // namespace

TEST_CASE("reading an undefined index is a programmer error")
{
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto s = sma(v, 3);
    CHECK_FALSE(s.defined(1));
    CHECK_THROWS_AS(static_cast<void>(s.at(1)), std::logic_error);
    CHECK_THROWS_AS(static_cast<void>(s.at(99)), std::logic_error);
    CHECK(std::isnan(s.raw()[0]));
}

TEST_CASE("zero lookback is rejected")
{
    const std::vector<double> v{1, 2, 3};
    CHECK_THROWS_AS(sma(v, 0), std::invalid_argument);
    CHECK_THROWS_AS(rsi(v, 0), std::invalid_argument);
    CHECK_THROWS_AS(psy(v, 0), std::invalid_argument);
}

TEST_CASE("sma")
{
    const auto c = sma(constant(7.0, 10), 4);
    CHECK(c.valid_from() == 3);
    for (std::size_t t = 3; t < 10; ++t) {
        CHECK(c.at(t) == 7.0);
    }
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto s = sma(v, 3);
    CHECK_FALSE(s.defined(0));
    CHECK_FALSE(s.defined(1));
    CHECK(s.at(2) == doctest::Approx(2.0));
    CHECK(s.at(3) == doctest::Approx(3.0));
    CHECK(s.at(4) == doctest::Approx(4.0));
    CHECK(s.name() == "SMA3");

    const auto shortv = sma(std::vector<double>{1.0, 2.0}, 5);
    CHECK(shortv.size() == 2);
    CHECK_FALSE(shortv.defined(0));
    CHECK_FALSE(shortv.defined(1));

    const auto walk = testing::random_walk(21, 500).closes();
    check_against(sma(walk, 20), testing::naive_sma(walk, 20), 1e-12);
}

TEST_CASE("rolling sums return to exactly zero once large moves leave the window")
{
    const std::vector<double> v{5.0, 6.1, 1e8 + 0.3, 1e8 + 0.3, 1e8 + 0.3, 1e8 + 0.3};
    CHECK(rsi(v, 2).at(5) == 50.0);
    auto jumpy = testing::series_from_closes({3.7, 1e7 + 0.1, 2.2, 2.2, 2.2, 2.2, 2.2});
    CHECK(dmi(jumpy, 3).plus_di.at(6) == 0.0);
}

TEST_CASE("ema")
{
    CHECK(ema_alpha(3, EmaMode::paper) == 0.25);
    CHECK(ema_alpha(3, EmaMode::conventional) == 0.5);
    for (auto mode : {EmaMode::paper, EmaMode::conventional}) {
        const auto e = ema(constant(3.5, 40), 9, mode);
        for (std::size_t t = 0; t < 40; ++t) {
            CHECK(e.at(t) == 3.5);
        }
    }
    const auto e = ema(std::vector<double>{10.0, 14.0}, 3, EmaMode::paper);
    CHECK(e.valid_from() == 0);
    CHECK(e.at(0) == 10.0);
    CHECK(e.at(1) == 11.0);
    CHECK_THROWS_AS(ema(std::vector<double>{}, 3), std::invalid_argument);
}

TEST_CASE("momentum family")
{
    const auto m = momentum_family(constant(50.0, 30), 10, MomentumKind::mom);
    const auto r = momentum_family(constant(50.0, 30), 10, MomentumKind::roc);
    CHECK(m.valid_from() == 10);
    CHECK(m.at(10) == 100.0);
    CHECK(r.at(29) == 0.0);

    std::vector<double> v(11, 1.0);
    v[0] = 100.0;
    v[10] = 110.0;
    CHECK(momentum_family(v, 10, MomentumKind::mom).at(10) == doctest::Approx(110.0));
    CHECK(momentum_family(v, 10, MomentumKind::roc).at(10) == doctest::Approx(10.0));

    std::vector<double> bad{0.0, 1.0, 2.0};
    CHECK_FALSE(momentum_family(bad, 1, MomentumKind::mom).defined(1));
    CHECK(momentum_family(bad, 1, MomentumKind::mom).defined(2));
}

TEST_CASE("stochastic K and D")
{
    // Close at the window high, then at the window low.
    const auto up = testing::series_from_closes({1, 2, 3, 4, 5});
    const auto kd = stochastic_kd(up, 3, 3);
    CHECK(kd.k.valid_from() == 2);
    CHECK(kd.d.valid_from() == 4);
    CHECK(kd.k.at(2) == 100.0);
    const auto down = testing::series_from_closes({5, 4, 3, 2, 1});
    CHECK(stochastic_kd(down, 3, 3).k.at(4) == 0.0);
    const auto flat = testing::series_from_closes(constant(9.0, 12));
    const auto fkd = stochastic_kd(flat, 9, 3);
    CHECK(fkd.k.at(8) == 50.0);
    CHECK(fkd.d.at(10) == 50.0);
}

TEST_CASE("macd")
{
    const auto c = macd_line(constant(4.0, 60), 12, 26);
    for (std::size_t t = 0; t < 60; ++t) {
        CHECK(c.at(t) == 0.0);
    }
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) {
        ramp[i] = 10.0 + static_cast<double>(i);
    }
    const auto m = macd_line(ramp, 12, 26);
    for (std::size_t t = 1; t < ramp.size(); ++t) {
        CHECK(m.at(t) > 0.0);
    }
    CHECK_THROWS_AS(macd_line(ramp, 26, 12), std::invalid_argument);
    CHECK_THROWS_AS(macd_line(ramp, 12, 12), std::invalid_argument);
}

TEST_CASE("rsi")
{
    std::vector<double> rising(30);
    for (std::size_t i = 0; i < rising.size(); ++i) {
        rising[i] = 1.0 + static_cast<double>(i);
    }
    const auto r = rsi(rising, 14);
    CHECK(r.valid_from() == 14);
    CHECK(r.at(14) == 100.0);
    CHECK(rsi(constant(2.0, 20), 14).at(19) == 50.0);
    std::vector<double> alt(40);
    for (std::size_t i = 0; i < alt.size(); ++i) {
        alt[i] = i % 2 == 0 ? 10.0 : 11.0;
    }
    for (std::size_t t = 14; t < alt.size(); ++t) {
        CHECK(rsi(alt, 14).at(t) == doctest::Approx(50.0));
    }
}

TEST_CASE("psy")
{
    std::vector<double> rising(20);
    for (std::size_t i = 0; i < rising.size(); ++i) {
        rising[i] = static_cast<double>(i);
    }
    CHECK(psy(rising, 10).at(10) == 1.0);
    CHECK(psy(constant(1.0, 20), 10).at(15) == 0.0);
    std::vector<double> half{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
    CHECK(psy(half, 10).at(10) == 0.5);
    CHECK(psy(half, 10).valid_from() == 10);
}

TEST_CASE("cci")
{
    const auto flat = testing::series_from_closes(constant(3.0, 12));
    CHECK(cci(flat, 9).at(8) == 0.0);
    CHECK(cci(flat, 9).valid_from() == 8);
    // Typical prices 1, 2, 3: mean 2, MAD 2/3, last deviation 1 = 0.015 * d * 100.
    const auto s = testing::series_from_closes({1, 2, 3});
    CHECK(cci(s, 3).at(2) == doctest::Approx(100.0));
    // Window {10, 12, z} with z - mean = 0.015 * MAD solved by hand: z = 11 + 1.5 * 0.01 / 0.995.
    const auto u = testing::series_from_closes({5.0, 10.0, 12.0, 11.0 + 1.5 * 0.01 / 0.995});
    CHECK(cci(u, 3).at(3) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bias")
{
    CHECK(bias(constant(5.0, 15), 10).at(12) == 0.0);
    std::vector<double> v(10, 100.0);
    v.push_back(110.0);
    // MA10 over {100 x9, 110} is 101; hand value (110 - 101) / 101.
    CHECK(bias(v, 10).at(10) == doctest::Approx(9.0 / 101.0));
    // Close equal to 1.1 x MA: window {x, ..., x, c} with c = 1.1 (9x + c)/10 -> c = 99x/89.
    std::vector<double> w(9, 89.0);
    w.push_back(99.0 * 1.1);
    const double ma = (9 * 89.0 + 99.0 * 1.1) / 10.0;
    CHECK(bias(w, 10).at(9) == doctest::Approx(w.back() / ma - 1.0));
    CHECK(bias(w, 10).valid_from() == 9);
}

TEST_CASE("dmi")
{
    std::vector<double> ramp(30);
    for (std::size_t i = 0; i < ramp.size(); ++i) {
        ramp[i] = 50.0 + 2.0 * static_cast<double>(i);
    }
    const auto rising = testing::series_from_closes(ramp);
    const auto di = dmi(rising, 14, DmiConvention::wilder);
    CHECK(di.plus_di.valid_from() == 14);
    CHECK(di.minus_di.at(20) == 0.0);
    CHECK(di.plus_di.at(20) > 0.0);
    const auto flat = testing::series_from_closes(constant(7.0, 15));
    const auto fd = dmi(flat, 14);
    CHECK(fd.plus_di.at(14) == 0.0);
    CHECK(fd.minus_di.at(14) == 0.0);
}

TEST_CASE("kernels match naive windowed recomputation on random walks")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = testing::random_walk(seed, 1000);
        const auto c = s.closes();
        check_against(sma(c, 20), testing::naive_sma(c, 20));
        check_against(sma(c, 5), testing::naive_sma(c, 5));
        check_against(ema(c, 20, EmaMode::paper), testing::naive_ema(c, 1.0 / 21.0));
        check_against(ema(c, 5, EmaMode::conventional), testing::naive_ema(c, 2.0 / 6.0));
        check_against(momentum_family(c, 10, MomentumKind::mom), testing::naive_mom(c, 10, false));
        check_against(momentum_family(c, 13, MomentumKind::roc), testing::naive_mom(c, 13, true));
        const auto kd = stochastic_kd(s, 9, 3);
        check_against(kd.k, testing::naive_k(s, 9));
        check_against(kd.d, testing::naive_d(s, 9, 3));
        check_against(rsi(c, 14), testing::naive_rsi(c, 14));
        check_against(psy(c, 10), testing::naive_psy(c, 10));
        check_against(cci(s, 9), testing::naive_cci(s, 9));
        check_against(bias(c, 10), testing::naive_bias(c, 10));
        for (bool literal : {false, true}) {
            const auto di = dmi(s, 14, literal ? DmiConvention::paper_literal : DmiConvention::wilder);
            const auto [p, m] = testing::naive_dmi(s, 14, literal);
            check_against(di.plus_di, p);
            check_against(di.minus_di, m);
        }
    }
}

TEST_CASE("indicators are invariant to power-of-two price scaling")
{
    const auto s = testing::random_walk(8, 400);
    std::vector<Bar> scaled(s.bars().begin(), s.bars().end());
    for (Bar& b : scaled) {
        b.open *= 4.0;
        b.high *= 4.0;
        b.low *= 4.0;
        b.close *= 4.0;
        b.adj_close *= 4.0;
    }
    const PriceSeries s4("X4", scaled);
    const auto c = s.closes();
    const auto c4 = s4.closes();
    for (std::size_t t = 20; t < s.size(); ++t) {
        REQUIRE(rsi(c, 14).at(t) == rsi(c4, 14).at(t));
        REQUIRE(psy(c, 10).at(t) == psy(c4, 10).at(t));
        REQUIRE(stochastic_kd(s, 9, 3).k.at(t) == stochastic_kd(s4, 9, 3).k.at(t));
        REQUIRE(cci(s, 9).at(t) == cci(s4, 9).at(t));
        REQUIRE(bias(c, 10).at(t) == bias(c4, 10).at(t));
        REQUIRE(momentum_family(c, 10, MomentumKind::roc).at(t) ==
                momentum_family(c4, 10, MomentumKind::roc).at(t));
        REQUIRE(sma(c4, 20).at(t) == 4.0 * sma(c, 20).at(t));
    }
}
