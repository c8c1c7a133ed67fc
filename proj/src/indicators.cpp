#include "cumret/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace cumret {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

void require_lookback(std::size_t n, const char* what)
{
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + ": lookback must be >= 1");
    }
}

// Windowed sum with Neumaier compensation. The nonzero counter lets an all-zero
// window report exactly 0 instead of accumulated rounding residue.
class RollingSum {
public:
    void add(double v)
    {
        accumulate(v);
        if (v != 0.0) {
            ++nonzero_;
        }
    }

    void remove(double v)
    {
        accumulate(-v);
        if (v != 0.0) {
            --nonzero_;
        }
    }

    double value() const noexcept { return nonzero_ == 0 ? 0.0 : sum_ + carry_; }

private:
    void accumulate(double v)
    {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double sum_{0.0};
    double carry_{0.0};
    std::size_t nonzero_{0};
};

// Monotonic deque over a sliding window: front holds the extreme of the last n indices.
template <typename Better>
class WindowExtreme {
public:
    WindowExtreme(std::span<const double> values, std::size_t n) : values_(values), n_(n) {}

    double push(std::size_t t)
    {
        while (!idx_.empty() && !Better{}(values_[idx_.back()], values_[t])) {
            idx_.pop_back();
        }
        idx_.push_back(t);
        if (idx_.front() + n_ <= t) {
            idx_.pop_front();
        }
        return values_[idx_.front()];
    }

private:
    std::span<const double> values_;
    std::size_t n_;
    std::deque<std::size_t> idx_;
};

std::map<std::string, double> params_n(std::size_t n)
{
    return {{"n", static_cast<double>(n)}};
}

}  // namespace

IndicatorSeries::IndicatorSeries(std::string name, std::map<std::string, double> params,
                                 std::vector<double> values, std::size_t valid_from)
    : name_(std::move(name)), params_(std::move(params)), values_(std::move(values)), valid_from_(valid_from)
{
    for (std::size_t t = 0; t < std::min(valid_from_, values_.size()); ++t) {
        values_[t] = kUndefined;
    }
}

IndicatorSeries IndicatorSeries::from_values(std::string name, std::vector<double> values)
{
    return IndicatorSeries(std::move(name), {}, std::move(values), 0);
}

bool IndicatorSeries::defined(std::size_t t) const noexcept
{
    return t >= valid_from_ && t < values_.size() && !std::isnan(values_[t]);
}

double IndicatorSeries::at(std::size_t t) const
{
    if (!defined(t)) {
        throw std::logic_error(name_ + ": read of undefined index " + std::to_string(t));
    }
    return values_[t];
}

IndicatorSeries sma(std::span<const double> values, std::size_t n)
{
    require_lookback(n, "sma");
    std::vector<double> out(values.size(), kUndefined);
    RollingSum sum;
    const double inv = static_cast<double>(n);
    for (std::size_t t = 0; t < values.size(); ++t) {
        sum.add(values[t]);
        if (t >= n) {
            sum.remove(values[t - n]);
        }
        if (t + 1 >= n) {
            out[t] = sum.value() / inv;
        }
    }
    return IndicatorSeries("SMA" + std::to_string(n), params_n(n), std::move(out), n - 1);
}

double ema_alpha(std::size_t n, EmaMode mode)
{
    const double denom = static_cast<double>(n) + 1.0;
    return mode == EmaMode::paper ? 1.0 / denom : 2.0 / denom;
}

IndicatorSeries ema(std::span<const double> values, std::size_t n, EmaMode mode)
{
    require_lookback(n, "ema");
    if (values.empty()) {
        throw std::invalid_argument("ema: empty series");
    }
    const double alpha = ema_alpha(n, mode);
    std::vector<double> out(values.size());
    out[0] = values[0];
    for (std::size_t t = 1; t < values.size(); ++t) {
        out[t] = out[t - 1] + alpha * (values[t] - out[t - 1]);
    }
    return IndicatorSeries("EMA" + std::to_string(n), {{"n", static_cast<double>(n)}, {"alpha", alpha}},
                           std::move(out), 0);
}

IndicatorSeries momentum_family(std::span<const double> values, std::size_t n, MomentumKind kind)
{
    require_lookback(n, "momentum");
    std::vector<double> out(values.size(), kUndefined);
    for (std::size_t t = n; t < values.size(); ++t) {
        const double past = values[t - n];
        if (!(past > 0.0)) {
            continue;
        }
        const double ratio = values[t] / past;
        out[t] = kind == MomentumKind::mom ? 100.0 * ratio : 100.0 * (ratio - 1.0);
    }
    const char* prefix = kind == MomentumKind::mom ? "MOM" : "ROC";
    return IndicatorSeries(prefix + std::to_string(n), params_n(n), std::move(out), n);
}

StochasticKD stochastic_kd(const PriceSeries& series, std::size_t n, std::size_t m)
{
    require_lookback(n, "stochastic_kd");
    require_lookback(m, "stochastic_kd");
    const auto closes = series.closes();
    const auto highs = series.highs();
    const auto lows = series.lows();
    const std::size_t len = closes.size();

    WindowExtreme<std::greater<>> hmax(highs, n);
    WindowExtreme<std::less<>> lmin(lows, n);
    std::vector<double> k(len, kUndefined);
    for (std::size_t t = 0; t < len; ++t) {
        const double hi = hmax.push(t);
        const double lo = lmin.push(t);
        if (t + 1 < n) {
            continue;
        }
        k[t] = hi == lo ? 50.0 : 100.0 * (closes[t] - lo) / (hi - lo);
    }

    std::vector<double> d(len, kUndefined);
    RollingSum sum;
    for (std::size_t t = n - 1; t < len; ++t) {
        sum.add(k[t]);
        if (t >= n - 1 + m) {
            sum.remove(k[t - m]);
        }
        if (t + 2 >= n + m) {
            d[t] = sum.value() / static_cast<double>(m);
        }
    }

    std::map<std::string, double> params{{"n", static_cast<double>(n)}, {"m", static_cast<double>(m)}};
    return StochasticKD{IndicatorSeries("K", params, std::move(k), n - 1),
                        IndicatorSeries("D", params, std::move(d), n + m - 2)};
}

IndicatorSeries macd_line(std::span<const double> values, std::size_t n_fast, std::size_t m_slow, EmaMode mode)
{
    if (n_fast >= m_slow) {
        throw std::invalid_argument("macd_line: fast lookback must be shorter than slow lookback");
    }
    const auto fast = ema(values, n_fast, mode);
    const auto slow = ema(values, m_slow, mode);
    std::vector<double> out(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        out[t] = fast.raw()[t] - slow.raw()[t];
    }
    return IndicatorSeries("MACD",
                           {{"n", static_cast<double>(n_fast)}, {"m", static_cast<double>(m_slow)}},
                           std::move(out), 0);
}

IndicatorSeries rsi(std::span<const double> values, std::size_t n)
{
    require_lookback(n, "rsi");
    std::vector<double> out(values.size(), kUndefined);
    RollingSum ups;
    RollingSum downs;
    auto up_at = [&](std::size_t t) { return std::max(values[t] - values[t - 1], 0.0); };
    auto down_at = [&](std::size_t t) { return std::max(values[t - 1] - values[t], 0.0); };
    for (std::size_t t = 1; t < values.size(); ++t) {
        ups.add(up_at(t));
        downs.add(down_at(t));
        if (t > n) {
            ups.remove(up_at(t - n));
            downs.remove(down_at(t - n));
        }
        if (t < n) {
            continue;
        }
        const double u = ups.value();
        const double d = downs.value();
        if (d == 0.0) {
            out[t] = u > 0.0 ? 100.0 : 50.0;
        } else {
            out[t] = 100.0 - 100.0 / (1.0 + u / d);
        }
    }
    return IndicatorSeries("RSI" + std::to_string(n), params_n(n), std::move(out), n);
}

IndicatorSeries psy(std::span<const double> values, std::size_t n)
{
    require_lookback(n, "psy");
    std::vector<double> out(values.size(), kUndefined);
    std::size_t up_count = 0;
    auto is_up = [&](std::size_t t) { return values[t] > values[t - 1]; };
    for (std::size_t t = 1; t < values.size(); ++t) {
        up_count += is_up(t) ? 1 : 0;
        if (t > n) {
            up_count -= is_up(t - n) ? 1 : 0;
        }
        if (t >= n) {
            out[t] = static_cast<double>(up_count) / static_cast<double>(n);
        }
    }
    return IndicatorSeries("PSY" + std::to_string(n), params_n(n), std::move(out), n);
}

IndicatorSeries cci(const PriceSeries& series, std::size_t n)
{
    require_lookback(n, "cci");
    const std::size_t len = series.size();
    std::vector<double> typical(len);
    for (std::size_t t = 0; t < len; ++t) {
        const Bar& b = series[t];
        typical[t] = (b.high + b.low + b.close) / 3.0;
    }
    // MAD needs the whole window anyway, so the mean is taken per window too.
    std::vector<double> out(len, kUndefined);
    for (std::size_t t = n - 1; t < len; ++t) {
        const auto win = std::span<const double>(typical).subspan(t + 1 - n, n);
        const auto [lo, hi] = std::minmax_element(win.begin(), win.end());
        if (*lo == *hi) {
            out[t] = 0.0;
            continue;
        }
        double mean = 0.0;
        for (double v : win) {
            mean += v;
        }
        mean /= static_cast<double>(n);
        double mad = 0.0;
        for (double v : win) {
            mad += std::fabs(v - mean);
        }
        mad /= static_cast<double>(n);
        out[t] = mad == 0.0 ? 0.0 : (typical[t] - mean) / (0.015 * mad);
    }
    return IndicatorSeries("CCI" + std::to_string(n), params_n(n), std::move(out), n - 1);
}

IndicatorSeries bias(std::span<const double> values, std::size_t n)
{
    const auto ma = sma(values, n);
    std::vector<double> out(values.size(), kUndefined);
    for (std::size_t t = ma.valid_from(); t < values.size(); ++t) {
        const double avg = ma.raw()[t];
        out[t] = (values[t] - avg) / avg;
    }
    return IndicatorSeries("BIAS" + std::to_string(n), params_n(n), std::move(out), n - 1);
}

DirectionalIndex dmi(const PriceSeries& series, std::size_t n, DmiConvention convention)
{
    require_lookback(n, "dmi");
    const std::size_t len = series.size();
    std::vector<double> pdm(len, 0.0);
    std::vector<double> mdm(len, 0.0);
    std::vector<double> tr(len, 0.0);
    for (std::size_t t = 1; t < len; ++t) {
        const Bar& cur = series[t];
        const Bar& prev = series[t - 1];
        pdm[t] = std::max(cur.high - prev.high, 0.0);
        if (convention == DmiConvention::wilder) {
            mdm[t] = std::max(prev.low - cur.low, 0.0);
            tr[t] = std::max({cur.high - cur.low, std::fabs(cur.high - prev.close),
                              std::fabs(cur.low - prev.close)});
        } else {
            mdm[t] = std::max(cur.low - prev.low, 0.0);
            tr[t] = std::max({cur.high - cur.low, cur.high - prev.close, cur.low - prev.close});
        }
    }

    std::vector<double> plus(len, kUndefined);
    std::vector<double> minus(len, kUndefined);
    RollingSum sp, sm, st;
    for (std::size_t t = 1; t < len; ++t) {
        sp.add(pdm[t]);
        sm.add(mdm[t]);
        st.add(tr[t]);
        if (t > n) {
            sp.remove(pdm[t - n]);
            sm.remove(mdm[t - n]);
            st.remove(tr[t - n]);
        }
        if (t < n) {
            continue;
        }
        const double range = st.value();
        if (range == 0.0) {
            plus[t] = 0.0;
            minus[t] = 0.0;
        } else {
            plus[t] = 100.0 * sp.value() / range;
            minus[t] = 100.0 * sm.value() / range;
        }
    }
    auto params = params_n(n);
    return DirectionalIndex{IndicatorSeries("PLUS_DI", params, std::move(plus), n),
                            IndicatorSeries("MINUS_DI", params, std::move(minus), n)};
}

}  // namespace cumret
