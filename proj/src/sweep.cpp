#include "cumret/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "cumret/backtest.hpp"
#include "cumret/boundcheck.hpp"

namespace cumret {

std::vector<double> KGrid::values() const
{
    if (!(lo >= 0.0 && lo <= hi && hi < 1.0) || !(step > 0.0)) {
        throw std::invalid_argument("k grid needs 0 <= lo <= hi < 1 and step > 0");
    }
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double k = lo + static_cast<double>(i) * step;
        if (k > hi + step * 1e-9) {
            break;
        }
        out.push_back(k);
    }
    return out;
}

std::vector<SweepKRow> sweep_k(std::span<const RuleSpec> rules, const PriceSeries& series, const KGrid& grid,
                               const BootstrapConfig& config)
{
    const auto ks = grid.values();
    std::vector<SweepKRow> out;
    for (const RuleSpec& rule : rules) {
        const auto replicas = run_replicas(config, series, rule);
        for (double k : ks) {
            const auto s = summarize_replicas(replicas, rule.name, series.symbol(), k, config.bars_per_year);
            out.push_back(SweepKRow{rule.name, k, s.mean_R, s.mean_n});
        }
    }
    return out;
}

std::vector<SweepNRow> sweep_n(const RuleSpec& rule, const PriceSeries& series, std::span<const double> k_list,
                               std::size_t n_max, std::uint64_t seed)
{
    for (double k : k_list) {
        require_cost_rate(k);
    }
    const Window whole{0, series.size() - 1};
    rng::Rng rng(rng::stream_seed(seed, "sweep-n:" + rule.name, 0));
    const SignalSeries signals = rule.is_random() ? random_window_signals(rng, whole) : generate_signals(rule, series);
    const auto trades = pair_trades(signals, series, whole);
    const ReturnSeries all = trade_returns(trades);
    const std::size_t n_top = std::min(n_max, all.size());

    std::vector<SweepNRow> out;
    out.reserve(k_list.size() * n_top);
    for (double k : k_list) {
        for (std::size_t n = 1; n <= n_top; ++n) {
            const ReturnSeries prefix(std::vector<double>(all.values().begin(),
                                                          all.values().begin() + static_cast<std::ptrdiff_t>(n)));
            const BoundReport rep = check_bound(prefix, k);
            out.push_back(SweepNRow{k, n, rep.R, rep.bound, rep.holds});
        }
    }
    return out;
}

}  // namespace cumret
