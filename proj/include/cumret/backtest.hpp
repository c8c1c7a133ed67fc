#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cumret/marketdata.hpp"
#include "cumret/random.hpp"
#include "cumret/returns.hpp"
#include "cumret/signals.hpp"

namespace cumret {

inline constexpr std::size_t kBarsPerYear = 252;
inline constexpr double kDefaultCostRate = 0.003;

/// One long round trip, bought and sold at the close.
struct Trade {
    std::size_t buy_index{0};
    std::size_t sell_index{0};
    double buy_price{0.0};
    double sell_price{0.0};
    bool forced{false};  // closed at the window's last bar rather than by a Sell

    bool operator==(const Trade&) const = default;
};

struct BacktestResult {
    std::vector<Trade> trades;
    ReturnSeries returns;
    std::size_t n{0};
    std::optional<double> r_bar;  // absent when n = 0
    double R{1.0};
    double k{0.0};
    double cagr{0.0};
    Window window;
};

/// Long/flat state machine over events inside `window`. Buy while long and Sell
/// while flat are ignored; a Buy on the exit bar is ignored; an open position is
/// force-closed at the exit bar.
std::vector<Trade> pair_trades(const SignalSeries& signals, const PriceSeries& series, Window window);

/// (S(sell) - S(buy)) / S(buy).
double trade_return(const Trade& trade);

ReturnSeries trade_returns(std::span<const Trade> trades);

/// R^(1/Y) - 1 with Y = bars / bars_per_year. Throws std::invalid_argument if R <= 0 or bars = 0.
double cagr(double R, std::size_t bars, std::size_t bars_per_year = kBarsPerYear);

/// CAGR of a strategy's trades over `bars` bars; 0 with no trades. Falls back to
/// the log-space product when the raw product under/overflows.
double strategy_cagr(const ReturnSeries& returns, double k, std::size_t bars,
                     std::size_t bars_per_year = kBarsPerYear);

/// CAGR of holding from the enter close to the exit close.
double buy_and_hold_cagr(const PriceSeries& series, Window window, std::size_t bars_per_year = kBarsPerYear);

/// Backtest over precomputed signals.
BacktestResult backtest_signals(const SignalSeries& signals, const PriceSeries& series, Window window, double k,
                                std::size_t bars_per_year = kBarsPerYear);

/// Full pipeline for one rule. `rng` is only drawn from for RND, whose events are
/// generated over the window and offset by window.enter.
BacktestResult run_backtest(const RuleSpec& rule, const PriceSeries& series, Window window, double k,
                            rng::Rng& rng, std::size_t bars_per_year = kBarsPerYear);

/// RND events for a window, shifted into series coordinates.
SignalSeries random_window_signals(rng::Rng& rng, Window window);

/// Throws std::invalid_argument unless enter < exit < series_len.
void require_window(Window window, std::size_t series_len);

}  // namespace cumret
