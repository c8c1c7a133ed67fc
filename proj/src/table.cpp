#include "cumret/table.hpp"

#include <cmath>
#include <stdexcept>

#include "cumret/format.hpp"

namespace cumret {

Metadata& Metadata::add(std::string key, std::string value)
{
    entries.emplace_back(std::move(key), std::move(value));
    return *this;
}

std::string Metadata::comment_line() const
{
    std::string out = "#";
    for (const auto& [k, v] : entries) {
        out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

nlohmann::json Metadata::to_json() const
{
    auto j = nlohmann::json::object();
    for (const auto& [k, v] : entries) {
        j[k] = v;
    }
    return j;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<nlohmann::json> cells)
{
    if (cells.size() != columns_.size()) {
        throw std::invalid_argument("table row has " + std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string render_cell(const nlohmann::json& cell)
{
    if (cell.is_null()) {
        return {};
    }
    if (cell.is_boolean()) {
        return cell.get<bool>() ? "1" : "0";
    }
    if (cell.is_number_integer()) {
        return cell.dump();
    }
    if (cell.is_number_float()) {
        const double v = cell.get<double>();
        return std::isfinite(v) ? format_number(v) : std::string{};
    }
    std::string s = cell.is_string() ? cell.get<std::string>() : cell.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') {
                quoted += '"';
            }
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

std::string Table::to_csv(const Metadata* meta) const
{
    std::string out;
    if (meta != nullptr) {
        out += meta->comment_line();
        out += '\n';
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += render_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json(const Metadata& meta) const
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
        auto obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& cell = row[c];
            obj[columns_[c]] = cell.is_number_float() && !std::isfinite(cell.get<double>()) ? nlohmann::json() : cell;
        }
        rows.push_back(std::move(obj));
    }
    nlohmann::json doc{{"meta", meta.to_json()}, {"columns", columns_}, {"rows", std::move(rows)}};
    return doc.dump(2) + "\n";
}

}  // namespace cumret
