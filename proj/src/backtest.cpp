#include "cumret/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cumret {

void require_window(Window window, std::size_t series_len)
{
    if (window.enter >= window.exit || window.exit >= series_len) {
        throw std::invalid_argument("invalid window " + std::to_string(window.enter) + ":" +
                                    std::to_string(window.exit) + " for " + std::to_string(series_len) +
                                    " bars");
    }
}

std::vector<Trade> pair_trades(const SignalSeries& signals, const PriceSeries& series, Window window)
{
    require_window(window, series.size());
    std::vector<Trade> trades;
    const auto& ev = signals.events;
    auto first = std::lower_bound(ev.begin(), ev.end(), window.enter,
                                  [](const Signal& s, std::size_t idx) { return s.index < idx; });

    constexpr std::size_t kFlat = static_cast<std::size_t>(-1);
    std::size_t open = kFlat;
    for (auto it = first; it != ev.end() && it->index <= window.exit; ++it) {
        if (open == kFlat && it->kind == SignalKind::buy && it->index < window.exit) {
            open = it->index;
        } else if (open != kFlat && it->kind == SignalKind::sell) {
            trades.push_back(Trade{open, it->index, series[open].close, series[it->index].close, false});
            open = kFlat;
        }
    }
    if (open != kFlat) {
        trades.push_back(Trade{open, window.exit, series[open].close, series[window.exit].close, true});
    }
    return trades;
}

double trade_return(const Trade& trade)
{
    return (trade.sell_price - trade.buy_price) / trade.buy_price;
}

ReturnSeries trade_returns(std::span<const Trade> trades)
{
    std::vector<double> out;
    out.reserve(trades.size());
    for (const Trade& t : trades) {
        out.push_back(trade_return(t));
    }
    return ReturnSeries(std::move(out));
}

double cagr(double R, std::size_t bars, std::size_t bars_per_year)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw std::invalid_argument("cagr: cumulative return must be positive and finite");
    }
    if (bars == 0 || bars_per_year == 0) {
        throw std::invalid_argument("cagr: bars and bars_per_year must be >= 1");
    }
    const double years = static_cast<double>(bars) / static_cast<double>(bars_per_year);
    return std::expm1(std::log(R) / years);
}

double strategy_cagr(const ReturnSeries& returns, double k, std::size_t bars, std::size_t bars_per_year)
{
    if (returns.empty()) {
        return 0.0;
    }
    const double R = cumulative_return(returns, k);
    if (R > 0.0 && std::isfinite(R)) {
        return cagr(R, bars, bars_per_year);
    }
    if (bars == 0 || bars_per_year == 0) {
        throw std::invalid_argument("cagr: bars and bars_per_year must be >= 1");
    }
    const double years = static_cast<double>(bars) / static_cast<double>(bars_per_year);
    return std::expm1(log_cumulative(returns, k) / years);
}

double buy_and_hold_cagr(const PriceSeries& series, Window window, std::size_t bars_per_year)
{
    require_window(window, series.size());
    return cagr(series[window.exit].close / series[window.enter].close, window.bars(), bars_per_year);
}

BacktestResult backtest_signals(const SignalSeries& signals, const PriceSeries& series, Window window, double k,
                                std::size_t bars_per_year)
{
    require_cost_rate(k);
    BacktestResult res;
    res.window = window;
    res.k = k;
    res.trades = pair_trades(signals, series, window);
    res.returns = trade_returns(res.trades);
    res.n = res.trades.size();
    if (res.n > 0) {
        res.r_bar = mean_return(res.returns);
    }
    res.R = cumulative_return(res.returns, k);
    res.cagr = strategy_cagr(res.returns, k, window.bars(), bars_per_year);
    return res;
}

SignalSeries random_window_signals(rng::Rng& rng, Window window)
{
    auto sig = random_signals(rng, window.bars() + 1);
    for (Signal& s : sig.events) {
        s.index += window.enter;
    }
    return sig;
}

BacktestResult run_backtest(const RuleSpec& rule, const PriceSeries& series, Window window, double k,
                            rng::Rng& rng, std::size_t bars_per_year)
{
    require_window(window, series.size());
    if (rule.is_random()) {
        return backtest_signals(random_window_signals(rng, window), series, window, k, bars_per_year);
    }
    return backtest_signals(generate_signals(rule, series), series, window, k, bars_per_year);
}

}  // namespace cumret
