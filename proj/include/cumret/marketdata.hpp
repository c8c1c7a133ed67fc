#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cumret {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`; nullopt if malformed or not a calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// One daily OHLCV row. Only `close`, `high` and `low` feed indicators and returns;
/// `adj_close` is carried through unchanged.
struct Bar {
    Date date{};
    double open{0.0};
    double high{0.0};
    double low{0.0};
    double close{0.0};
    double adj_close{0.0};
    double volume{0.0};

    bool operator==(const Bar&) const = default;
};

/// Inclusive bar-index range [enter, exit].
struct Window {
    std::size_t enter{0};
    std::size_t exit{0};

    std::size_t bars() const noexcept { return exit - enter; }
    bool operator==(const Window&) const = default;
};

/// Ordered daily bars with strictly increasing dates, at least two of them.
class PriceSeries {
public:
    /// Throws std::invalid_argument if there are fewer than 2 bars or dates do not strictly increase.
    PriceSeries(std::string symbol, std::vector<Bar> bars);

    const std::string& symbol() const noexcept { return symbol_; }
    std::span<const Bar> bars() const noexcept { return bars_; }
    std::size_t size() const noexcept { return bars_.size(); }
    const Bar& operator[](std::size_t i) const { return bars_[i]; }

    std::vector<double> closes() const;
    std::vector<double> highs() const;
    std::vector<double> lows() const;

    bool operator==(const PriceSeries&) const = default;

private:
    std::string symbol_;
    std::vector<Bar> bars_;
};

/// Unrecoverable input problem (bad header, no rows, dates out of order).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A diagnostic tied to a 1-based CSV line (parse) or a 0-based bar index (validate).
struct Issue {
    std::size_t location{0};
    std::string message;

    bool operator==(const Issue&) const = default;
};

struct ParseResult {
    PriceSeries series;
    std::vector<Issue> warnings;
};

inline constexpr std::string_view kOhlcvHeader = "Date,Open,High,Low,Close,Adj Close,Volume";

/// Parses a Yahoo-Finance daily CSV. Rows with a non-numeric field ("null") are
/// dropped and reported as warnings. Throws DataError on fatal problems.
ParseResult parse_ohlcv(std::string_view text, std::string symbol = {});

/// Reads and parses a file; the symbol defaults to the file stem.
ParseResult load_ohlcv_file(const std::filesystem::path& path);

/// Inverse of parse_ohlcv for any series it accepted.
std::string emit_ohlcv(const PriceSeries& series);

struct ValidationReport {
    std::vector<Issue> fatal_errors;
    std::vector<Issue> warnings;
    std::size_t bar_count{0};

    bool ok() const noexcept { return fatal_errors.empty(); }
    /// One JSON object per issue, then a summary object; LF-terminated.
    std::string to_json_lines(std::string_view symbol) const;
};

/// Non-positive prices are fatal; OHLC inconsistencies and zero volume are warnings.
ValidationReport validate(const PriceSeries& series);

/// Copy of bars [enter, exit]. Throws std::invalid_argument unless enter < exit < size.
PriceSeries window(const PriceSeries& series, std::size_t enter, std::size_t exit);
PriceSeries window(const PriceSeries& series, Window w);

}  // namespace cumret
