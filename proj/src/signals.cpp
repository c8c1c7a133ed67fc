#include "cumret/signals.hpp"

#include <stdexcept>

namespace cumret {

namespace {

using Cmp = Guard::Comparison;

CrossSpec cross(Operand left, Operand right, CrossDirection dir, std::optional<Guard> guard = std::nullopt)
{
    return CrossSpec{std::move(left), std::move(right), dir, std::move(guard)};
}

SeriesRef ref(std::string key)
{
    return SeriesRef{std::move(key)};
}

std::string sma_key(std::size_t n) { return "SMA" + std::to_string(n); }
std::string ema_key(std::size_t n) { return "EMA" + std::to_string(n); }

// Resolved view of an operand: a series or a constant.
struct Line {
    const IndicatorSeries* series{nullptr};
    double constant{0.0};

    bool defined(std::size_t t) const { return series == nullptr || series->defined(t); }
    double at(std::size_t t) const { return series == nullptr ? constant : series->at(t); }
};

Line resolve(const Operand& op, const IndicatorSet& set)
{
    if (const auto* c = std::get_if<double>(&op)) {
        return Line{nullptr, *c};
    }
    const auto& key = std::get<SeriesRef>(op).key;
    const auto it = set.find(key);
    if (it == set.end()) {
        throw std::invalid_argument("indicator '" + key + "' not computed for this rule");
    }
    return Line{&it->second, 0.0};
}

bool crosses(const Line& x, const Line& y, std::size_t t, CrossDirection dir)
{
    if (t == 0 || !x.defined(t - 1) || !x.defined(t) || !y.defined(t - 1) || !y.defined(t)) {
        return false;
    }
    const double x0 = x.at(t - 1);
    const double x1 = x.at(t);
    const double y0 = y.at(t - 1);
    const double y1 = y.at(t);
    if (dir == CrossDirection::up) {
        return x0 <= y0 && x1 > y1;
    }
    return x0 >= y0 && x1 < y1;
}

struct ResolvedCross {
    Line left;
    Line right;
    CrossDirection direction;
    const IndicatorSeries* guard_series{nullptr};
    std::optional<Guard> guard;

    bool fires(std::size_t t) const
    {
        if (!crosses(left, right, t, direction)) {
            return false;
        }
        if (!guard) {
            return true;
        }
        if (!guard_series->defined(t)) {
            return false;
        }
        const double g = guard_series->at(t);
        return guard->comparison == Cmp::less ? g < guard->threshold : g > guard->threshold;
    }
};

ResolvedCross resolve(const CrossSpec& spec, const IndicatorSet& set)
{
    ResolvedCross out{resolve(spec.left, set), resolve(spec.right, set), spec.direction, nullptr, spec.guard};
    if (spec.guard) {
        out.guard_series = resolve(Operand{spec.guard->series}, set).series;
    }
    return out;
}

}  // namespace

std::string_view to_string(SignalKind kind) noexcept
{
    return kind == SignalKind::buy ? "Buy" : "Sell";
}

const std::array<std::string_view, 13>& rule_names() noexcept
{
    static const std::array<std::string_view, 13> names{"SMA", "EMA",  "MOM", "KD",  "MACD", "RSI", "PSY",
                                                        "CCI", "MA",   "BIAS", "ROC", "DMI",  "RND"};
    return names;
}

RuleSpec make_rule(std::string_view name, const RuleOptions& options)
{
    using D = CrossDirection;
    RuleSpec r;
    r.name = std::string(name);
    r.options = options;

    if (name == "SMA") {
        r.params = {20, std::nullopt};
        r.buy = cross(ref(sma_key(20)), ref("C"), D::up);
        r.sell = cross(ref(sma_key(20)), ref("C"), D::down);
    } else if (name == "EMA") {
        r.params = {5, 20};
        r.buy = cross(ref(ema_key(5)), ref(ema_key(20)), D::up);
        r.sell = cross(ref(ema_key(5)), ref(ema_key(20)), D::down);
    } else if (name == "MOM") {
        r.params = {10, std::nullopt};
        const double level = options.paper_literal_mom ? 0.0 : 100.0;
        r.buy = cross(ref("MOM10"), level, D::up);
        r.sell = cross(ref("MOM10"), level, D::down);
    } else if (name == "KD") {
        r.params = {12, 12};
        r.buy = cross(ref("K"), ref("D"), D::up, Guard{ref("D"), Cmp::less, 20.0});
        r.sell = cross(ref("K"), ref("D"), D::down, Guard{ref("D"), Cmp::greater, 80.0});
    } else if (name == "MACD") {
        r.params = {12, 26};
        r.buy = cross(ref("MACD"), 0.0, D::up);
        r.sell = cross(ref("MACD"), 0.0, D::down);
    } else if (name == "RSI") {
        r.params = {14, std::nullopt};
        r.buy = cross(ref("RSI14"), 30.0, D::up);
        r.sell = cross(ref("RSI14"), 70.0, D::down);
    } else if (name == "PSY") {
        r.params = {10, std::nullopt};
        r.buy = cross(ref("PSY10"), 0.25, D::up);
        r.sell = cross(ref("PSY10"), 0.75, D::down);
    } else if (name == "CCI") {
        r.params = {9, std::nullopt};
        r.buy = cross(ref("CCI9"), -100.0, D::up);
        r.sell = cross(ref("CCI9"), 100.0, D::down);
    } else if (name == "MA") {
        r.params = {5, 20};
        r.buy = cross(ref(sma_key(5)), ref(sma_key(20)), D::up);
        r.sell = cross(ref(sma_key(5)), ref(sma_key(20)), D::down);
    } else if (name == "BIAS") {
        r.params = {10, std::nullopt};
        r.buy = cross(ref("BIAS10"), -0.045, D::up);
        r.sell = cross(ref("BIAS10"), 0.05, D::down);
    } else if (name == "ROC") {
        r.params = {13, std::nullopt};
        r.buy = cross(ref("ROC13"), 0.0, D::up);
        r.sell = cross(ref("ROC13"), 0.0, D::down);
    } else if (name == "DMI") {
        r.params = {14, std::nullopt};
        r.buy = cross(ref("PLUS_DI"), ref("MINUS_DI"), D::up);
        r.sell = cross(ref("PLUS_DI"), ref("MINUS_DI"), D::down);
    } else if (name == "RND") {
        r.params = {15, std::nullopt};
    } else {
        throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
    }
    return r;
}

bool detect_cross(const IndicatorSeries& x, const IndicatorSeries& y, std::size_t t, CrossDirection direction)
{
    return crosses(Line{&x, 0.0}, Line{&y, 0.0}, t, direction);
}

bool detect_cross(const IndicatorSeries& x, double y, std::size_t t, CrossDirection direction)
{
    return crosses(Line{&x, 0.0}, Line{nullptr, y}, t, direction);
}

IndicatorSet compute_rule_indicators(const RuleSpec& rule, const PriceSeries& series)
{
    IndicatorSet set;
    const auto closes = series.closes();
    auto put = [&](IndicatorSeries s) {
        auto key = s.name();
        set.insert_or_assign(std::move(key), std::move(s));
    };
    const std::size_t n = rule.params.n;
    const std::size_t m = rule.params.m.value_or(n);
    const auto& name = rule.name;

    if (name == "SMA") {
        put(sma(closes, n));
        put(IndicatorSeries::from_values("C", closes));
    } else if (name == "EMA") {
        put(ema(closes, n, rule.options.ema_mode));
        put(ema(closes, m, rule.options.ema_mode));
    } else if (name == "MOM") {
        put(momentum_family(closes, n, MomentumKind::mom));
    } else if (name == "KD") {
        auto kd = stochastic_kd(series, n, m);
        put(std::move(kd.k));
        put(std::move(kd.d));
    } else if (name == "MACD") {
        put(macd_line(closes, n, m, rule.options.ema_mode));
    } else if (name == "RSI") {
        put(rsi(closes, n));
    } else if (name == "PSY") {
        put(psy(closes, n));
    } else if (name == "CCI") {
        put(cci(series, n));
    } else if (name == "MA") {
        put(sma(closes, n));
        put(sma(closes, m));
    } else if (name == "BIAS") {
        put(bias(closes, n));
    } else if (name == "ROC") {
        put(momentum_family(closes, n, MomentumKind::roc));
    } else if (name == "DMI") {
        auto di = dmi(series, n, rule.options.dmi_convention);
        put(std::move(di.plus_di));
        put(std::move(di.minus_di));
    } else if (name == "RND") {
        // no indicators
    } else {
        throw std::invalid_argument("unknown rule '" + name + "'");
    }
    return set;
}

SignalSeries generate_signals(const RuleSpec& rule, const IndicatorSet& indicators)
{
    if (rule.is_random()) {
        throw std::invalid_argument("RND signals need a random generator; use random_signals");
    }
    const auto buy = resolve(rule.buy, indicators);
    const auto sell = resolve(rule.sell, indicators);
    std::size_t len = 0;
    for (const auto& [key, s] : indicators) {
        len = std::max(len, s.size());
    }
    SignalSeries out;
    for (std::size_t t = 1; t < len; ++t) {
        const bool b = buy.fires(t);
        const bool s = sell.fires(t);
        if (b == s) {
            continue;  // nothing, or a contradiction
        }
        out.events.push_back(Signal{t, b ? SignalKind::buy : SignalKind::sell});
    }
    return out;
}

SignalSeries generate_signals(const RuleSpec& rule, const PriceSeries& series)
{
    return generate_signals(rule, compute_rule_indicators(rule, series));
}

SignalSeries random_signals(rng::Rng& rng, std::size_t horizon, std::size_t min_gap, std::size_t max_gap)
{
    if (min_gap < 1 || min_gap > max_gap) {
        throw std::invalid_argument("random_signals: need 1 <= min_gap <= max_gap");
    }
    SignalSeries out;
    std::size_t pos = 0;
    SignalKind next = SignalKind::buy;
    while (true) {
        pos += static_cast<std::size_t>(rng.uniform_int(min_gap, max_gap));
        if (pos >= horizon) {
            break;
        }
        out.events.push_back(Signal{pos, next});
        next = next == SignalKind::buy ? SignalKind::sell : SignalKind::buy;
    }
    return out;
}

}  // namespace cumret
