#include "cumret/reference.hpp"

#include <stdexcept>

#include "cumret/format.hpp"
#include "cumret/random.hpp"
#include "reference_data.hpp"

namespace cumret::reference {

std::optional<TableKind> parse_table_kind(std::string_view text) noexcept
{
    if (text == "r_bar") {
        return TableKind::r_bar;
    }
    if (text == "cagr") {
        return TableKind::cagr;
    }
    if (text == "cmv") {
        return TableKind::cmv;
    }
    return std::nullopt;
}

std::string_view to_string(TableKind kind) noexcept
{
    switch (kind) {
    case TableKind::r_bar:
        return "r_bar";
    case TableKind::cagr:
        return "cagr";
    case TableKind::cmv:
        return "cmv";
    }
    return "?";
}

const std::array<std::string_view, 4>& indices() noexcept
{
    static const std::array<std::string_view, 4> names{"DJIA", "FTSE", "N225", "SCI"};
    return names;
}

const std::array<std::string_view, 13>& rule_order() noexcept
{
    static const std::array<std::string_view, 13> names{"BIAS", "CCI", "DMI", "SMA", "EMA", "KD", "MA",
                                                        "MACD", "MOM", "PSY", "RND", "ROC", "RSI"};
    return names;
}

bool ReferenceTables::complete() const
{
    for (auto rule : rule_order()) {
        const auto rb = r_bar.find(std::string(rule));
        const auto cg = cagr.find(std::string(rule));
        if (rb == r_bar.end() || cg == cagr.end()) {
            return false;
        }
        for (auto index : indices()) {
            if (!rb->second.contains(std::string(index)) || !cg->second.contains(std::string(index))) {
                return false;
            }
        }
    }
    for (auto index : indices()) {
        if (!cmv.contains(std::string(index))) {
            return false;
        }
    }
    return true;
}

std::string_view embedded_csv() noexcept
{
    return detail::kEmbeddedTables;
}

std::uint64_t embedded_checksum() noexcept
{
    return rng::fnv1a64(embedded_csv());
}

bool fixture_intact() noexcept
{
    return embedded_checksum() == kFixtureChecksum;
}

ReferenceTables parse_reference_csv(std::string_view text)
{
    ReferenceTables out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != "table,rule,index,value") {
                throw std::invalid_argument("reference fixture: bad header");
            }
            continue;
        }
        std::string_view fields[4];
        std::size_t from = 0;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = f < 3 ? line.find(',', from) : line.size();
            if (comma == std::string_view::npos) {
                throw std::invalid_argument("reference fixture: short row at line " + std::to_string(line_no));
            }
            fields[f] = line.substr(from, comma - from);
            from = comma + 1;
        }
        const auto kind = parse_table_kind(fields[0]);
        const auto value = parse_finite(fields[3]);
        if (!kind || !value) {
            throw std::invalid_argument("reference fixture: bad row at line " + std::to_string(line_no));
        }
        const std::string rule(fields[1]);
        const std::string index(fields[2]);
        switch (*kind) {
        case TableKind::r_bar:
            out.r_bar[rule][index] = *value;
            break;
        case TableKind::cagr:
            out.cagr[rule][index] = *value;
            break;
        case TableKind::cmv:
            out.cmv[index] = *value;
            break;
        }
    }
    return out;
}

const ReferenceTables& bundled()
{
    if (!fixture_intact()) {
        throw std::runtime_error("reference fixture checksum mismatch");
    }
    static const ReferenceTables tables = parse_reference_csv(embedded_csv());
    return tables;
}

std::optional<double> find_reference(TableKind table, std::string_view rule, std::string_view index)
{
    const auto& t = bundled();
    const std::string r(rule);
    const std::string i(index);
    if (table == TableKind::cmv || (table == TableKind::cagr && r == "CMV")) {
        if (table == TableKind::cmv && r != "CMV" && !r.empty()) {
            return std::nullopt;
        }
        const auto it = t.cmv.find(i);
        return it == t.cmv.end() ? std::nullopt : std::optional<double>(it->second);
    }
    const auto& grid = table == TableKind::r_bar ? t.r_bar : t.cagr;
    const auto row = grid.find(r);
    if (row == grid.end()) {
        return std::nullopt;
    }
    const auto cell = row->second.find(i);
    return cell == row->second.end() ? std::nullopt : std::optional<double>(cell->second);
}

double lookup_reference(TableKind table, std::string_view rule, std::string_view index)
{
    const auto v = find_reference(table, rule, index);
    if (!v) {
        throw std::invalid_argument("no reference value for (" + std::string(to_string(table)) + ", " +
                                    std::string(rule) + ", " + std::string(index) + ")");
    }
    return *v;
}

}  // namespace cumret::reference
