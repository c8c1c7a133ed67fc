#pragma once

// Indicator kernels for the twelve technical rules. Every kernel returns a series
// aligned to its input; indices before valid_from (and any individually undefined
// point) hold NaN internally and throw on checked access.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cumret/marketdata.hpp"

namespace cumret {

enum class EmaMode {
    paper,         // alpha = 1/(n+1)
    conventional,  // alpha = 2/(n+1)
};

enum class DmiConvention {
    wilder,         // -DM = max(L[t-1] - L[t], 0), TR uses absolute gaps
    paper_literal,  // -DM = max(L[t] - L[t-1], 0), TR = max(H-L, H-Cp, L-Cp)
};

enum class MomentumKind { mom, roc };

/// Lookbacks for one rule: primary `n`, optional secondary `m`.
struct IndicatorParams {
    std::size_t n{1};
    std::optional<std::size_t> m;

    bool operator==(const IndicatorParams&) const = default;
};

class IndicatorSeries {
public:
    IndicatorSeries(std::string name, std::map<std::string, double> params, std::vector<double> values,
                    std::size_t valid_from);

    /// Wraps raw values as a fully defined series (NaN entries stay undefined).
    static IndicatorSeries from_values(std::string name, std::vector<double> values);

    const std::string& name() const noexcept { return name_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t valid_from() const noexcept { return valid_from_; }

    bool defined(std::size_t t) const noexcept;

    /// Throws std::logic_error when `t` is not defined.
    double at(std::size_t t) const;

    /// Underlying storage; undefined entries are NaN.
    std::span<const double> raw() const noexcept { return values_; }

private:
    std::string name_;
    std::map<std::string, double> params_;
    std::vector<double> values_;
    std::size_t valid_from_{0};
};

struct StochasticKD {
    IndicatorSeries k;
    IndicatorSeries d;
};

struct DirectionalIndex {
    IndicatorSeries plus_di;
    IndicatorSeries minus_di;
};

/// Simple moving average; valid_from = n-1.
IndicatorSeries sma(std::span<const double> values, std::size_t n);

double ema_alpha(std::size_t n, EmaMode mode);

/// EMA seeded with values[0]; valid_from = 0.
IndicatorSeries ema(std::span<const double> values, std::size_t n, EmaMode mode = EmaMode::paper);

/// MOM = 100 C[t]/C[t-n]; ROC = 100 (C[t]/C[t-n] - 1); valid_from = n.
IndicatorSeries momentum_family(std::span<const double> values, std::size_t n, MomentumKind kind);

/// %K over n bars (flat window gives 50) and %D as the m-bar mean of %K.
StochasticKD stochastic_kd(const PriceSeries& series, std::size_t n, std::size_t m);

/// EMA(n_fast) - EMA(m_slow); throws std::invalid_argument unless n_fast < m_slow.
IndicatorSeries macd_line(std::span<const double> values, std::size_t n_fast, std::size_t m_slow,
                          EmaMode mode = EmaMode::paper);

/// RSI over the last n changes; 100 when only gains, 50 when flat; valid_from = n.
IndicatorSeries rsi(std::span<const double> values, std::size_t n);

/// Fraction of the last n changes that were strict rises; valid_from = n.
IndicatorSeries psy(std::span<const double> values, std::size_t n);

/// (M - mean M) / (0.015 * MAD) on typical price M = (H+L+C)/3; 0 when MAD = 0.
IndicatorSeries cci(const PriceSeries& series, std::size_t n);

/// (C - SMA(n)) / SMA(n) as a fraction; valid_from = n-1.
IndicatorSeries bias(std::span<const double> values, std::size_t n);

/// +DI / -DI from n-bar sums of directional movement and true range; valid_from = n.
DirectionalIndex dmi(const PriceSeries& series, std::size_t n,
                     DmiConvention convention = DmiConvention::wilder);

}  // namespace cumret
