#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cumret/indicators.hpp"
#include "cumret/marketdata.hpp"
#include "cumret/random.hpp"

namespace cumret {

enum class CrossDirection { up, down };
enum class SignalKind { buy, sell };

std::string_view to_string(SignalKind kind) noexcept;

/// Names an indicator inside an IndicatorSet ("C" is the close price).
struct SeriesRef {
    std::string key;
    bool operator==(const SeriesRef&) const = default;
};

using Operand = std::variant<SeriesRef, double>;

/// Extra condition evaluated at the crossing bar, e.g. "D < 20".
struct Guard {
    enum class Comparison { less, greater };

    SeriesRef series;
    Comparison comparison{Comparison::less};
    double threshold{0.0};
};

struct CrossSpec {
    Operand left;
    Operand right;
    CrossDirection direction{CrossDirection::up};
    std::optional<Guard> guard;
};

struct RuleOptions {
    EmaMode ema_mode{EmaMode::paper};
    DmiConvention dmi_convention{DmiConvention::wilder};
    bool paper_literal_mom{false};  // MOM crosses 0 (never fires for a ratio) instead of 100
};

struct RuleSpec {
    std::string name;
    CrossSpec buy;
    CrossSpec sell;
    IndicatorParams params;
    RuleOptions options;

    bool is_random() const noexcept { return name == "RND"; }
};

struct Signal {
    std::size_t index{0};
    SignalKind kind{SignalKind::buy};

    bool operator==(const Signal&) const = default;
};

/// Events with strictly increasing indices.
struct SignalSeries {
    std::vector<Signal> events;

    bool operator==(const SignalSeries&) const = default;
};

using IndicatorSet = std::map<std::string, IndicatorSeries>;

/// The 13 rule names, in the order used for reports.
const std::array<std::string_view, 13>& rule_names() noexcept;

/// Builds the rule with its default parameters. Throws std::invalid_argument for unknown names.
RuleSpec make_rule(std::string_view name, const RuleOptions& options = {});

/// Up-cross at t: x[t-1] <= y[t-1] and x[t] > y[t]; down-cross mirrors it.
/// Returns false at t = 0 or when any of the four values is undefined.
bool detect_cross(const IndicatorSeries& x, const IndicatorSeries& y, std::size_t t, CrossDirection direction);
bool detect_cross(const IndicatorSeries& x, double y, std::size_t t, CrossDirection direction);

/// Every series the rule refers to, computed over the full price history.
IndicatorSet compute_rule_indicators(const RuleSpec& rule, const PriceSeries& series);

/// Raw buy/sell stream (not position-filtered). Throws std::invalid_argument for RND.
SignalSeries generate_signals(const RuleSpec& rule, const IndicatorSet& indicators);
SignalSeries generate_signals(const RuleSpec& rule, const PriceSeries& series);

inline constexpr std::size_t kRandomMinGap = 1;
inline constexpr std::size_t kRandomMaxGap = 29;

/// Alternating Buy/Sell events starting with Buy; each gap (the first measured
/// from index 0) is uniform on [min_gap, max_gap]. Events lie in [0, horizon).
SignalSeries random_signals(rng::Rng& rng, std::size_t horizon, std::size_t min_gap = kRandomMinGap,
                            std::size_t max_gap = kRandomMaxGap);

}  // namespace cumret
