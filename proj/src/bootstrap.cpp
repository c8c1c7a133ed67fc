#include "cumret/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "cumret/boundcheck.hpp"

namespace cumret {

namespace {

template <typename Fn>
void for_each_index(std::size_t count, std::size_t workers, Fn&& fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                fn(i);
            }
        });
    }
}

double mean_of(const std::vector<double>& v)
{
    return compensated_sum(v) / static_cast<double>(v.size());
}

}  // namespace

void require_valid(const BootstrapConfig& config)
{
    if (config.replicas == 0) {
        throw std::invalid_argument("bootstrap: M must be >= 1");
    }
    if (config.min_window < 2) {
        throw std::invalid_argument("bootstrap: min_window must be >= 2");
    }
    if (config.bars_per_year == 0) {
        throw std::invalid_argument("bootstrap: bars_per_year must be >= 1");
    }
    require_cost_rate(config.k);
}

Window sample_window(rng::Rng& rng, std::size_t series_len, std::size_t min_window)
{
    if (series_len <= min_window) {
        throw std::invalid_argument("sample_window: series of " + std::to_string(series_len) +
                                    " bars is not longer than min_window " + std::to_string(min_window));
    }
    const auto enter = static_cast<std::size_t>(rng.uniform_int(0, series_len - 1 - min_window));
    const auto exit = static_cast<std::size_t>(rng.uniform_int(enter + min_window, series_len - 1));
    return Window{enter, exit};
}

rng::Rng replica_rng(std::uint64_t seed, std::string_view rule, std::size_t index)
{
    return rng::Rng(rng::stream_seed(seed, rule, index));
}

std::vector<ReplicaRecord> run_replicas(const BootstrapConfig& config, const PriceSeries& series,
                                        const RuleSpec& rule)
{
    require_valid(config);
    const SignalSeries shared = rule.is_random() ? SignalSeries{} : generate_signals(rule, series);

    std::vector<ReplicaRecord> out(config.replicas);
    for_each_index(config.replicas, config.workers, [&](std::size_t i) {
        auto rng = replica_rng(config.seed, rule.name, i);
        const Window w = sample_window(rng, series.size(), config.min_window);
        const auto trades =
            rule.is_random() ? pair_trades(random_window_signals(rng, w), series, w) : pair_trades(shared, series, w);
        out[i] = ReplicaRecord{w, trade_returns(trades), buy_and_hold_cagr(series, w, config.bars_per_year)};
    });
    return out;
}

double quantile_sorted(std::span<const double> sorted, double level)
{
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BootstrapSummary summarize_replicas(std::span<const ReplicaRecord> replicas, std::string rule, std::string symbol,
                                    double k, std::size_t bars_per_year)
{
    require_cost_rate(k);
    if (replicas.empty()) {
        throw std::invalid_argument("summarize_replicas: no replicas");
    }
    BootstrapSummary s;
    s.rule = std::move(rule);
    s.symbol = std::move(symbol);
    s.replicas = replicas.size();
    s.k = k;

    std::vector<double> Rs, cagrs, cmvs, ns, r_bars, all_returns;
    for (const ReplicaRecord& rep : replicas) {
        const std::size_t n = rep.returns.size();
        ns.push_back(static_cast<double>(n));
        cmvs.push_back(rep.cmv);
        if (n == 0) {
            ++s.replicas_with_no_trades;
            Rs.push_back(1.0);
            cagrs.push_back(0.0);
            continue;
        }
        ++s.trading_replicas;
        const BoundReport audit = check_bound(rep.returns, k);
        s.bound_violations += audit.holds ? 0 : 1;
        Rs.push_back(cumulative_return(rep.returns, k));
        cagrs.push_back(strategy_cagr(rep.returns, k, rep.window.bars(), bars_per_year));
        r_bars.push_back(audit.r_bar);
        all_returns.insert(all_returns.end(), rep.returns.values().begin(), rep.returns.values().end());
    }

    s.mean_R = mean_of(Rs);
    s.mean_cagr = mean_of(cagrs);
    s.mean_cmv = mean_of(cmvs);
    s.mean_n = mean_of(ns);
    if (!r_bars.empty()) {
        s.mean_r_bar = mean_of(r_bars);
        s.pooled_r_bar = mean_of(all_returns);
    }
    std::sort(cagrs.begin(), cagrs.end());
    for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) {
        s.cagr_quantiles[q] = quantile_sorted(cagrs, kQuantileLevels[q]);
    }
    return s;
}

BootstrapSummary run_bootstrap(const BootstrapConfig& config, const PriceSeries& series, const RuleSpec& rule)
{
    const auto replicas = run_replicas(config, series, rule);
    return summarize_replicas(replicas, rule.name, series.symbol(), config.k, config.bars_per_year);
}

double bootstrap_cmv(const BootstrapConfig& config, const PriceSeries& series)
{
    require_valid(config);
    std::vector<double> cmvs(config.replicas);
    for_each_index(config.replicas, config.workers, [&](std::size_t i) {
        auto rng = replica_rng(config.seed, "CMV", i);
        cmvs[i] = buy_and_hold_cagr(series, sample_window(rng, series.size(), config.min_window),
                                    config.bars_per_year);
    });
    return mean_of(cmvs);
}

BootstrapTables summarize_tables(const SummaryGrid& summaries, const std::map<std::string, double>& cmv,
                                 std::vector<std::string> rule_order, std::vector<std::string> index_order)
{
    if (summaries.empty()) {
        throw std::invalid_argument("summarize_tables: no summaries");
    }
    if (rule_order.empty()) {
        for (const auto& [rule, _] : summaries) {
            rule_order.push_back(rule);
        }
    }
    if (index_order.empty()) {
        std::set<std::string> seen;
        for (const auto& [_, by_index] : summaries) {
            for (const auto& [index, _s] : by_index) {
                if (seen.insert(index).second) {
                    index_order.push_back(index);
                }
            }
        }
    }

    BootstrapTables t;
    t.rules = rule_order;
    t.indices = index_order;
    for (const auto& index : index_order) {
        const auto it = cmv.find(index);
        t.cmv.push_back(it == cmv.end() ? std::nullopt : std::optional<double>(it->second));
    }
    for (const auto& rule : rule_order) {
        auto& r_row = t.r_bar.emplace_back();
        auto& c_row = t.cagr.emplace_back();
        const auto by_rule = summaries.find(rule);
        for (const auto& index : index_order) {
            const BootstrapSummary* s = nullptr;
            if (by_rule != summaries.end()) {
                const auto it = by_rule->second.find(index);
                if (it != by_rule->second.end()) {
                    s = &it->second;
                }
            }
            r_row.push_back(s ? s->mean_r_bar : std::nullopt);
            c_row.push_back(s ? std::optional<double>(s->mean_cagr) : std::nullopt);
        }
    }
    for (const auto& index : index_order) {
        for (const auto& rule : rule_order) {
            const auto by_rule = summaries.find(rule);
            if (by_rule == summaries.end()) {
                continue;
            }
            const auto it = by_rule->second.find(index);
            if (it != by_rule->second.end()) {
                t.box.push_back(BoxRow{index, rule, it->second.cagr_quantiles, it->second.mean_cagr});
            }
        }
    }
    return t;
}

}  // namespace cumret
