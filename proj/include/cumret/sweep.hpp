#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cumret/bootstrap.hpp"
#include "cumret/marketdata.hpp"
#include "cumret/signals.hpp"

namespace cumret {

/// Cost-rate grid lo, lo+step, ... up to hi (inclusive, within rounding).
struct KGrid {
    double lo{0.001};
    double hi{0.01};
    double step{0.001};

    /// Throws std::invalid_argument unless 0 <= lo <= hi < 1 and step > 0.
    std::vector<double> values() const;
};

struct SweepKRow {
    std::string rule;
    double k{0.0};
    double mean_R{1.0};
    double mean_n{0.0};
};

/// Bootstrap mean R per (rule, k). Replicas are drawn once per rule and re-priced
/// at each k, so every k sees the same windows and trades.
std::vector<SweepKRow> sweep_k(std::span<const RuleSpec> rules, const PriceSeries& series, const KGrid& grid,
                               const BootstrapConfig& config);

struct SweepNRow {
    double k{0.0};
    std::size_t n{0};
    double R{1.0};
    double bound{1.0};
    bool holds{true};
};

/// Running R and mean-return bound after each of the first n_max trades the rule
/// makes over the whole series, for every k in `k_list`.
std::vector<SweepNRow> sweep_n(const RuleSpec& rule, const PriceSeries& series, std::span<const double> k_list,
                               std::size_t n_max, std::uint64_t seed);

}  // namespace cumret
