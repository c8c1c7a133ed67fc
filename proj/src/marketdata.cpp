#include "cumret/marketdata.hpp"

#include "cumret/format.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cumret {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool all_digits(std::string_view s)
{
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return !s.empty();
}

std::vector<double> column(std::span<const Bar> bars, double Bar::*field)
{
    std::vector<double> out;
    out.reserve(bars.size());
    for (const Bar& b : bars) {
        out.push_back(b.*field);
    }
    return out;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    const auto y = text.substr(0, 4);
    const auto m = text.substr(5, 2);
    const auto d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) {
        return std::nullopt;
    }
    const int yi = std::stoi(std::string(y));
    const unsigned mi = static_cast<unsigned>(std::stoi(std::string(m)));
    const unsigned di = static_cast<unsigned>(std::stoi(std::string(d)));
    const Date date{std::chrono::year{yi}, std::chrono::month{mi}, std::chrono::day{di}};
    if (!date.ok()) {
        return std::nullopt;
    }
    return date;
}

std::string format_date(const Date& date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

PriceSeries::PriceSeries(std::string symbol, std::vector<Bar> bars)
    : symbol_(std::move(symbol)), bars_(std::move(bars))
{
    if (bars_.size() < 2) {
        throw std::invalid_argument("price series needs at least 2 bars");
    }
    for (std::size_t i = 1; i < bars_.size(); ++i) {
        if (!(bars_[i - 1].date < bars_[i].date)) {
            throw std::invalid_argument("non-monotone dates at bar " + std::to_string(i));
        }
    }
}

std::vector<double> PriceSeries::closes() const { return column(bars_, &Bar::close); }
std::vector<double> PriceSeries::highs() const { return column(bars_, &Bar::high); }
std::vector<double> PriceSeries::lows() const { return column(bars_, &Bar::low); }

ParseResult parse_ohlcv(std::string_view text, std::string symbol)
{
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }

    std::vector<Bar> bars;
    std::vector<Issue> warnings;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t start = 0;

    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (line != kOhlcvHeader) {
                throw DataError("missing or unknown header: expected '" + std::string(kOhlcvHeader) + "'");
            }
            have_header = true;
            continue;
        }

        const auto fields = split(line, ',');
        if (fields.size() != 7) {
            throw DataError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                            std::to_string(fields.size()));
        }
        const auto date = parse_date(fields[0]);
        if (!date) {
            throw DataError("line " + std::to_string(line_no) + ": bad date '" + std::string(fields[0]) + "'");
        }

        double values[6];
        bool numeric = true;
        for (std::size_t f = 0; f < 6; ++f) {
            const auto v = parse_finite(fields[f + 1]);
            if (!v) {
                numeric = false;
                break;
            }
            values[f] = *v;
        }
        if (!numeric) {
            warnings.push_back({line_no, "dropped row with non-numeric field"});
            continue;
        }
        if (!bars.empty() && !(bars.back().date < *date)) {
            throw DataError("non-monotone dates at line " + std::to_string(line_no));
        }
        bars.push_back(Bar{*date, values[0], values[1], values[2], values[3], values[4], values[5]});
    }

    if (!have_header) {
        throw DataError("missing or unknown header: empty document");
    }
    if (bars.empty()) {
        throw DataError("no valid rows");
    }
    if (bars.size() < 2) {
        throw DataError("need at least 2 valid rows, got 1");
    }
    return ParseResult{PriceSeries(std::move(symbol), std::move(bars)), std::move(warnings)};
}

ParseResult load_ohlcv_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ohlcv(buf.str(), path.stem().string());
}

std::string emit_ohlcv(const PriceSeries& series)
{
    std::string out(kOhlcvHeader);
    out += '\n';
    for (const Bar& b : series.bars()) {
        out += format_date(b.date);
        for (double v : {b.open, b.high, b.low, b.close, b.adj_close, b.volume}) {
            out += ',';
            out += format_plain(v);
        }
        out += '\n';
    }
    return out;
}

ValidationReport validate(const PriceSeries& series)
{
    ValidationReport report;
    report.bar_count = series.size();
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Bar& b = series[i];
        if (!(b.open > 0.0 && b.high > 0.0 && b.low > 0.0 && b.close > 0.0)) {
            report.fatal_errors.push_back({i, "non-positive price on " + format_date(b.date)});
            continue;
        }
        if (b.high < std::max(b.open, b.close)) {
            report.warnings.push_back({i, "high below open/close on " + format_date(b.date)});
        }
        if (b.low > std::min(b.open, b.close)) {
            report.warnings.push_back({i, "low above open/close on " + format_date(b.date)});
        }
        if (b.volume < 0.0) {
            report.fatal_errors.push_back({i, "negative volume on " + format_date(b.date)});
        } else if (b.volume == 0.0) {
            report.warnings.push_back({i, "zero volume on " + format_date(b.date)});
        }
    }
    return report;
}

std::string ValidationReport::to_json_lines(std::string_view symbol) const
{
    std::string out;
    auto emit = [&](const char* severity, const Issue& issue) {
        nlohmann::json j{{"symbol", symbol}, {"severity", severity}, {"bar", issue.location},
                         {"message", issue.message}};
        out += j.dump();
        out += '\n';
    };
    for (const Issue& i : fatal_errors) {
        emit("fatal", i);
    }
    for (const Issue& i : warnings) {
        emit("warning", i);
    }
    nlohmann::json summary{{"symbol", symbol},
                           {"severity", "summary"},
                           {"bar_count", bar_count},
                           {"fatal", fatal_errors.size()},
                           {"warnings", warnings.size()}};
    out += summary.dump();
    out += '\n';
    return out;
}

PriceSeries window(const PriceSeries& series, std::size_t enter, std::size_t exit)
{
    if (enter >= exit) {
        throw std::invalid_argument("window: enter must be < exit");
    }
    if (exit >= series.size()) {
        throw std::invalid_argument("window: exit beyond last bar");
    }
    const auto bars = series.bars();
    return PriceSeries(series.symbol(),
                       std::vector<Bar>(bars.begin() + static_cast<std::ptrdiff_t>(enter),
                                        bars.begin() + static_cast<std::ptrdiff_t>(exit) + 1));
}

PriceSeries window(const PriceSeries& series, Window w)
{
    return window(series, w.enter, w.exit);
}

}  // namespace cumret
