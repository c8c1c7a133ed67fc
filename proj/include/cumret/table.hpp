#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cumret {

/// Provenance written at the top of every CSV/JSON output.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;

    Metadata& add(std::string key, std::string value);

    /// "# key=value key=value" (no trailing newline).
    std::string comment_line() const;
    nlohmann::json to_json() const;
};

/// Column-oriented output; cells are JSON scalars (null renders as an empty CSV field).
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<nlohmann::json> cells);

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<nlohmann::json>>& rows() const noexcept { return rows_; }

    /// Metadata comment line, header, rows; LF line endings.
    std::string to_csv(const Metadata* meta = nullptr) const;

    /// {"meta": {...}, "columns": [...], "rows": [{col: value, ...}, ...]}
    std::string to_json(const Metadata& meta) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

/// CSV rendering of one cell.
std::string render_cell(const nlohmann::json& cell);

}  // namespace cumret
