#include "cumret/returns.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cumret {

namespace {

void require_valid_return(double r)
{
    if (!std::isfinite(r) || r <= -1.0) {
        throw std::invalid_argument("return must be finite and > -1, got " + std::to_string(r));
    }
}

}  // namespace

ReturnSeries::ReturnSeries(std::vector<double> values) : values_(std::move(values))
{
    for (double r : values_) {
        require_valid_return(r);
    }
}

ReturnSeries ReturnSeries::concat(const ReturnSeries& tail) const
{
    ReturnSeries out = *this;
    out.values_.insert(out.values_.end(), tail.values_.begin(), tail.values_.end());
    return out;
}

void require_cost_rate(double k)
{
    if (!(k >= 0.0 && k < 1.0)) {
        throw std::invalid_argument("transaction cost rate must lie in [0, 1), got " + std::to_string(k));
    }
}

namespace {

// Neumaier accumulator.
struct Accumulator {
    double sum{0.0};
    double carry{0.0};

    void add(double v) noexcept
    {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    double value() const noexcept { return sum + carry; }
};

// Running product kept as (hi + lo) * 2^exponent. The rounding error of every
// multiplication is recovered with an FMA and carried in `lo`, so the result is
// within a few ulp of the exact product of the (rounded) factors regardless of
// length. `hi` is renormalised whenever it leaves [2^-400, 2^400], and extreme
// factors are split first, so neither part can overflow or underflow.
struct ScaledProduct {
    double hi{1.0};
    double lo{0.0};
    long exponent{0};

    void mul(double f) noexcept
    {
        if (!(f > 0x1p-500 && f < 0x1p500)) {
            int e = 0;
            f = std::frexp(f, &e);
            exponent += e;
        }
        const double p = hi * f;
        const double err = std::fma(hi, f, -p);
        lo = lo * f + err;  // rounding here is second order
        hi = p;
        if (!(hi > 0x1p-400 && hi < 0x1p400)) {
            rescale();
        }
    }
    void rescale() noexcept
    {
        int e = 0;
        hi = std::frexp(hi, &e);
        lo = std::ldexp(lo, -e);
        exponent += e;
    }
    double value() const noexcept
    {
        const double m = hi + lo;
        if (exponent > 4000 || exponent < -4000) {
            return exponent > 0 ? HUGE_VAL : 0.0;
        }
        return std::ldexp(m, static_cast<int>(exponent));
    }
    double log() const noexcept
    {
        return std::log(hi + lo) + static_cast<double>(exponent) * 0.69314718055994530942;
    }
};

template <class Factor>
ScaledProduct scaled_product(std::span<const double> returns, Factor factor) noexcept
{
    ScaledProduct p;
    for (double r : returns) {
        p.mul(factor(r));
    }
    return p;
}

double product_of_factors(std::span<const double> returns, double k)
{
    const double keep = 1.0 - k;
    return scaled_product(returns, [keep](double r) { return keep * (1.0 + r); }).value();
}

}  // namespace

double compensated_sum(std::span<const double> values) noexcept
{
    Accumulator acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

double mean_return(const ReturnSeries& rs)
{
    if (rs.empty()) {
        throw std::invalid_argument("mean_return of an empty series");
    }
    // Average the offsets from the first value. Each offset is split exactly into
    // a rounded part and its error (TwoSum), so a constant series yields its value
    // bit for bit and a general one is accurate to about one ulp.
    const auto v = rs.values();
    const double pivot = v[0];
    Accumulator acc;
    for (double r : v) {
        const double d = r - pivot;
        const double z = d - r;
        const double err = (r - (d - z)) + (-pivot - z);
        acc.add(d);
        acc.add(err);
    }
    return pivot + acc.value() / static_cast<double>(v.size());
}

double cumulative_return(const ReturnSeries& rs, double k)
{
    require_cost_rate(k);
    return product_of_factors(rs.values(), k);
}

double cumulative_return(std::span<const double> returns, double k)
{
    for (double r : returns) {
        require_valid_return(r);
    }
    require_cost_rate(k);
    return product_of_factors(returns, k);
}

double log_cumulative(const ReturnSeries& rs, double k)
{
    require_cost_rate(k);
    if (rs.empty()) {
        return 0.0;
    }
    // The cost term is exact in closed form; the growth term is one log of a scaled product.
    const double growth = scaled_product(rs.values(), [](double r) { return 1.0 + r; }).log();
    return static_cast<double>(rs.size()) * std::log1p(-k) + growth;
}

}  // namespace cumret
