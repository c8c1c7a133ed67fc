#pragma once

// Return and transaction-cost algebra shared by the backtester and the bound
// audit. Both sides call cumulative_return / log_cumulative from here.

#include <cstddef>
#include <span>
#include <vector>

namespace cumret {

/// Per-trade simple returns, each strictly greater than -1.
class ReturnSeries {
public:
    ReturnSeries() = default;

    /// Throws std::invalid_argument if any value is non-finite or <= -1.
    explicit ReturnSeries(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// This series followed by `tail`.
    ReturnSeries concat(const ReturnSeries& tail) const;

    bool operator==(const ReturnSeries&) const = default;

private:
    std::vector<double> values_;
};

/// Throws std::invalid_argument unless 0 <= k < 1.
void require_cost_rate(double k);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) noexcept;

/// Arithmetic mean; throws std::invalid_argument on an empty series.
double mean_return(const ReturnSeries& rs);

/// R(n) = prod (1-k)(1+r_i); 1 for an empty series.
double cumulative_return(const ReturnSeries& rs, double k);

/// Same as above for unchecked input; throws std::invalid_argument if some r_i <= -1.
double cumulative_return(std::span<const double> returns, double k);

/// sum ln((1-k)(1+r_i)); 0 for an empty series.
double log_cumulative(const ReturnSeries& rs, double k);

}  // namespace cumret
