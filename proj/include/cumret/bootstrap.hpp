#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cumret/backtest.hpp"
#include "cumret/marketdata.hpp"
#include "cumret/random.hpp"
#include "cumret/returns.hpp"
#include "cumret/signals.hpp"

namespace cumret {

struct BootstrapConfig {
    std::size_t replicas{1000};
    std::size_t min_window{260};
    double k{kDefaultCostRate};
    std::uint64_t seed{42};
    std::vector<std::string> rules;
    std::size_t bars_per_year{kBarsPerYear};
    std::size_t workers{1};  // does not affect results
};

/// Throws std::invalid_argument if replicas = 0, min_window < 2 or k outside [0, 1).
void require_valid(const BootstrapConfig& config);

/// enter uniform on [0, len-1-min_window], then exit uniform on [enter+min_window, len-1].
Window sample_window(rng::Rng& rng, std::size_t series_len, std::size_t min_window);

/// One sampled window and the trades a rule made inside it. Cost-independent.
struct ReplicaRecord {
    Window window;
    ReturnSeries returns;
    double cmv{0.0};  // buy-and-hold CAGR over the same window
};

/// Generator for replica `index` of `rule`: derived from (seed, rule, index) only.
rng::Rng replica_rng(std::uint64_t seed, std::string_view rule, std::size_t index);

/// All replicas for one rule, in replica order. Indicators and signals are computed
/// once over the full series and shared by every replica.
std::vector<ReplicaRecord> run_replicas(const BootstrapConfig& config, const PriceSeries& series,
                                        const RuleSpec& rule);

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

struct BootstrapSummary {
    std::string rule;
    std::string symbol;
    std::size_t replicas{0};
    double k{0.0};
    std::optional<double> mean_r_bar;    // mean of per-replica r_bar over trading replicas
    std::optional<double> pooled_r_bar;  // mean over all trades of all replicas
    double mean_R{1.0};
    double mean_cagr{0.0};
    double mean_cmv{0.0};
    std::array<double, 5> cagr_quantiles{};
    double mean_n{0.0};
    std::size_t replicas_with_no_trades{0};
    std::size_t trading_replicas{0};
    std::size_t bound_violations{0};  // replicas whose R exceeded the mean-return bound

    bool operator==(const BootstrapSummary&) const = default;
};

/// Linear-interpolation quantile of an ascending sample; throws on an empty sample.
double quantile_sorted(std::span<const double> sorted, double level);

/// Aggregates replicas at cost rate `k`. No-trade replicas count as R = 1, CAGR = 0.
BootstrapSummary summarize_replicas(std::span<const ReplicaRecord> replicas, std::string rule, std::string symbol,
                                    double k, std::size_t bars_per_year = kBarsPerYear);

BootstrapSummary run_bootstrap(const BootstrapConfig& config, const PriceSeries& series, const RuleSpec& rule);

/// Mean buy-and-hold CAGR over windows drawn from the "CMV" stream.
double bootstrap_cmv(const BootstrapConfig& config, const PriceSeries& series);

/// rule -> index symbol -> summary
using SummaryGrid = std::map<std::string, std::map<std::string, BootstrapSummary>>;

struct BoxRow {
    std::string index;
    std::string rule;
    std::array<double, 5> quantiles{};
    double mean{0.0};
};

/// Rules x indices matrices in Table-2/Table-3 layout plus box-plot rows.
struct BootstrapTables {
    std::vector<std::string> rules;
    std::vector<std::string> indices;
    std::vector<std::vector<std::optional<double>>> r_bar;  // [rule][index]
    std::vector<std::vector<std::optional<double>>> cagr;   // [rule][index]
    std::vector<std::optional<double>> cmv;                 // [index]
    std::vector<BoxRow> box;
};

/// Empty orders default to the grid's key order. Throws std::invalid_argument on an empty grid.
BootstrapTables summarize_tables(const SummaryGrid& summaries, const std::map<std::string, double>& cmv,
                                 std::vector<std::string> rule_order = {},
                                 std::vector<std::string> index_order = {});

}  // namespace cumret
