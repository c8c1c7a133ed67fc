#pragma once

// Checks of the cumulative-return upper bound [(1-k)(1+r_bar)]^n, the log-convexity
// inequality it rests on, and the (1-k^2)^n envelope that applies when r_bar <= k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cumret/random.hpp"
#include "cumret/returns.hpp"

namespace cumret {

inline constexpr double kBoundTolerance = 1e-9;

/// Above this many trades check_bound compares logarithms instead of raw products.
inline constexpr std::size_t kLogSpaceThreshold = 1000;

/// [(1-k)(1+r_bar)]^n; 1 for an empty series.
double theorem1_bound(const ReturnSeries& rs, double k);

/// n * (ln(1-k) + ln(1+r_bar)); 0 for an empty series.
double log_theorem1_bound(const ReturnSeries& rs, double k);

struct BoundReport {
    std::size_t n{0};
    double k{0.0};
    double r_bar{0.0};
    double R{1.0};
    double bound{1.0};
    double log_R{0.0};
    double log_bound{0.0};
    std::optional<double> envelope;  // (1-k^2)^n, present when r_bar <= k
    double slack{0.0};               // bound - R
    bool holds{true};                // R <= bound * (1 + tolerance)
    bool log_space{false};           // which comparison produced `holds`
};

BoundReport check_bound(const ReturnSeries& rs, double k, double tolerance = kBoundTolerance);

/// Direct-product and log-space verdicts regardless of n, for cross-checking the two paths.
bool bound_holds_direct(const ReturnSeries& rs, double k, double tolerance = kBoundTolerance);
bool bound_holds_log(const ReturnSeries& rs, double k, double tolerance = kBoundTolerance);

struct DiCheck {
    double lhs{0.0};  // -n ln(mean(1+r_i))
    double rhs{0.0};  // sum -ln(1+r_i)
    bool holds{true};
};

/// The f = -ln, unit-weight instance of the convexity inequality; throws on an empty series.
DiCheck di_inequality_check(const ReturnSeries& rs);

/// (1-k^2)^n; throws std::invalid_argument unless 0 < k < 1.
double proposition1_envelope(double k, std::size_t n);

/// Smallest n with (1-k^2)^n < epsilon: ceil(ln(epsilon) / ln(1-k^2)).
std::size_t envelope_horizon(double k, double epsilon);

struct DecayPoint {
    std::size_t n{0};
    double R{1.0};
    double bound{1.0};
    double envelope{1.0};
    double r_bar{0.0};
};

/// Simulated trade sequence whose running mean never exceeds `r_bar_target`:
/// returns come in pairs (target - s*u, target + s*u) with u uniform on [0, 1).
/// spread = 0 gives every trade exactly the target return.
std::vector<DecayPoint> decay_curve(double k, double r_bar_target, std::size_t n_max, rng::Rng& rng,
                                    double spread = 0.02);

struct StressConfig {
    std::size_t cases{1'000'000};
    std::uint64_t seed{42};
    std::size_t workers{1};
    std::size_t max_n{5000};
    double r_min{-0.9};
    double r_max{2.0};
    double k_max{0.5};
    std::size_t partitions{64};  // fixed split, so results do not depend on `workers`
};

struct StressResult {
    std::size_t cases{0};
    std::size_t violations{0};
    std::size_t log_space_cases{0};
    double max_log_excess{0.0};  // max over cases of log_R - log_bound (<= 0 when the bound holds)
};

/// Randomized audit of R <= [(1-k)(1+r_bar)]^n: n uniform on [1, max_n], r_i uniform on (r_min, r_max), k on [0, k_max).
StressResult run_bound_stress(const StressConfig& config);

}  // namespace cumret
