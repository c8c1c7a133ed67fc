#include "cumret/boundcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cumret {

double theorem1_bound(const ReturnSeries& rs, double k)
{
    require_cost_rate(k);
    if (rs.empty()) {
        return 1.0;
    }
    const double r_bar = mean_return(rs);
    if (!(1.0 + r_bar > 0.0)) {
        throw std::invalid_argument("theorem1_bound: 1 + r_bar must be positive");
    }
    return std::pow((1.0 - k) * (1.0 + r_bar), static_cast<double>(rs.size()));
}

double log_theorem1_bound(const ReturnSeries& rs, double k)
{
    require_cost_rate(k);
    if (rs.empty()) {
        return 0.0;
    }
    const double r_bar = mean_return(rs);
    if (!(1.0 + r_bar > 0.0)) {
        throw std::invalid_argument("log_theorem1_bound: 1 + r_bar must be positive");
    }
    return static_cast<double>(rs.size()) * (std::log1p(-k) + std::log1p(r_bar));
}

bool bound_holds_direct(const ReturnSeries& rs, double k, double tolerance)
{
    return cumulative_return(rs, k) <= theorem1_bound(rs, k) * (1.0 + tolerance);
}

bool bound_holds_log(const ReturnSeries& rs, double k, double tolerance)
{
    return log_cumulative(rs, k) <= log_theorem1_bound(rs, k) + std::log1p(tolerance);
}

BoundReport check_bound(const ReturnSeries& rs, double k, double tolerance)
{
    require_cost_rate(k);
    BoundReport rep;
    rep.n = rs.size();
    rep.k = k;
    if (rs.empty()) {
        if (k > 0.0) {
            rep.envelope = 1.0;
        }
        return rep;
    }
    rep.r_bar = mean_return(rs);
    rep.log_bound = static_cast<double>(rep.n) * (std::log1p(-k) + std::log1p(rep.r_bar));
    rep.log_space = rep.n > kLogSpaceThreshold;
    if (rep.log_space) {
        rep.log_R = log_cumulative(rs, k);
        rep.R = std::exp(rep.log_R);
        rep.bound = std::exp(rep.log_bound);
        rep.holds = rep.log_R <= rep.log_bound + std::log1p(tolerance);
        // bound - R without forming either when they overflow
        rep.slack = -rep.bound * std::expm1(rep.log_R - rep.log_bound);
    } else {
        rep.R = cumulative_return(rs, k);
        rep.bound = std::pow((1.0 - k) * (1.0 + rep.r_bar), static_cast<double>(rep.n));
        rep.log_R = rep.R > 0.0 && std::isfinite(rep.R) ? std::log(rep.R) : log_cumulative(rs, k);
        rep.holds = rep.R <= rep.bound * (1.0 + tolerance);
        rep.slack = rep.bound - rep.R;
    }
    if (k > 0.0 && rep.r_bar <= k) {
        rep.envelope = proposition1_envelope(k, rep.n);
    }
    return rep;
}

DiCheck di_inequality_check(const ReturnSeries& rs)
{
    if (rs.empty()) {
        throw std::invalid_argument("di_inequality_check: empty series");
    }
    const double n = static_cast<double>(rs.size());
    std::vector<double> neg_logs;
    neg_logs.reserve(rs.size());
    for (double r : rs.values()) {
        neg_logs.push_back(-std::log1p(r));
    }
    DiCheck out;
    out.lhs = -n * std::log1p(mean_return(rs));
    out.rhs = compensated_sum(neg_logs);
    out.holds = out.lhs <= out.rhs + 1e-12 * std::fabs(out.rhs);
    return out;
}

double proposition1_envelope(double k, std::size_t n)
{
    if (!(k > 0.0 && k < 1.0)) {
        throw std::invalid_argument("proposition1_envelope: k must lie in (0, 1)");
    }
    return std::pow(1.0 - k * k, static_cast<double>(n));
}

std::size_t envelope_horizon(double k, double epsilon)
{
    if (!(k > 0.0 && k < 1.0)) {
        throw std::invalid_argument("envelope_horizon: k must lie in (0, 1)");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("envelope_horizon: epsilon must lie in (0, 1)");
    }
    return static_cast<std::size_t>(std::ceil(std::log(epsilon) / std::log1p(-k * k)));
}

std::vector<DecayPoint> decay_curve(double k, double r_bar_target, std::size_t n_max, rng::Rng& rng,
                                    double spread)
{
    require_cost_rate(k);
    if (n_max == 0) {
        throw std::invalid_argument("decay_curve: n_max must be >= 1");
    }
    if (!(spread >= 0.0) || !(r_bar_target - spread > -1.0)) {
        throw std::invalid_argument("decay_curve: returns would reach -1");
    }
    std::vector<DecayPoint> out;
    out.reserve(n_max);
    const double log_keep = std::log1p(-k);
    double log_growth = 0.0;  // sum ln(1+r_i)
    double sum_r = 0.0;
    double pending = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        double r = r_bar_target;
        if (spread > 0.0) {
            if (n % 2 == 1) {
                pending = spread * rng.uniform01();
                r = r_bar_target - pending;
            } else {
                r = r_bar_target + pending;
            }
        }
        log_growth += std::log1p(r);
        sum_r += r;
        const double nd = static_cast<double>(n);
        const double r_bar = sum_r / nd;
        DecayPoint p;
        p.n = n;
        p.r_bar = r_bar;
        p.R = std::exp(nd * log_keep + log_growth);
        p.bound = std::exp(nd * (log_keep + std::log1p(r_bar)));
        p.envelope = k > 0.0 ? proposition1_envelope(k, n) : 1.0;
        out.push_back(p);
    }
    return out;
}

StressResult run_bound_stress(const StressConfig& config)
{
    if (config.partitions == 0 || config.max_n == 0) {
        throw std::invalid_argument("run_bound_stress: partitions and max_n must be >= 1");
    }
    if (!(config.k_max > 0.0 && config.k_max <= 1.0) || !(config.r_min > -1.0 && config.r_min < config.r_max)) {
        throw std::invalid_argument("run_bound_stress: bad ranges");
    }
    std::vector<StressResult> parts(config.partitions);

    auto run_partition = [&](std::size_t p) {
        StressResult& res = parts[p];
        res.max_log_excess = -std::numeric_limits<double>::infinity();
        const std::size_t begin = config.cases * p / config.partitions;
        const std::size_t end = config.cases * (p + 1) / config.partitions;
        rng::Rng rng(rng::stream_seed(config.seed, "bound-stress", p));
        for (std::size_t c = begin; c < end; ++c) {
            const auto n = static_cast<std::size_t>(rng.uniform_int(1, config.max_n));
            const double k = rng.uniform(0.0, config.k_max);
            std::vector<double> buf(n);
            for (double& r : buf) {
                do {
                    r = rng.uniform(config.r_min, config.r_max);
                } while (r <= config.r_min);
            }
            const ReturnSeries rs(std::move(buf));
            const BoundReport rep = check_bound(rs, k);
            ++res.cases;
            res.violations += rep.holds ? 0 : 1;
            res.log_space_cases += rep.log_space ? 1 : 0;
            res.max_log_excess = std::max(res.max_log_excess, rep.log_R - rep.log_bound);
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, config.partitions));
    if (workers == 1) {
        for (std::size_t p = 0; p < config.partitions; ++p) {
            run_partition(p);
        }
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t p = w; p < config.partitions; p += workers) {
                    run_partition(p);
                }
            });
        }
    }

    StressResult total;
    total.max_log_excess = -std::numeric_limits<double>::infinity();
    for (const auto& r : parts) {
        total.cases += r.cases;
        total.violations += r.violations;
        total.log_space_cases += r.log_space_cases;
        total.max_log_excess = std::max(total.max_log_excess, r.max_log_excess);
    }
    return total;
}

}  // namespace cumret
