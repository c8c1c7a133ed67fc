#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cumret/marketdata.hpp"
#include "cumret/signals.hpp"

namespace cumret::cli {

enum class Format { csv, json };

struct RunConfig {
    std::string command;
    std::vector<std::string> data;
    std::vector<std::string> rules;
    double k{0.003};
    std::size_t replicas{1000};
    std::uint64_t seed{42};
    std::filesystem::path out;  // empty: single outputs go to stdout
    Format format{Format::csv};

    std::size_t min_window{260};
    std::size_t workers{1};
    std::optional<Window> window;
    RuleOptions options;

    std::size_t stress_cases{0};
    bool curve{false};
    double rbar{0.0};
    std::size_t nmax{0};
    double spread{0.02};

    std::string k_grid{"0.001:0.01:0.001"};
    std::vector<double> k_list{0.001, 0.003, 0.005, 0.007};

    std::string ref_table;
    std::string ref_rule;
    std::string ref_index;
};

/// Exit codes: 0 success, 1 fatal data problem or failed bound audit, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Relative paths that do not exist are looked up under $CUMRET_DATA_DIR.
std::filesystem::path resolve_data_path(const std::string& path);

/// "ALL" or a comma list; throws std::invalid_argument for unknown names.
std::vector<std::string> parse_rule_list(const std::string& text);

}  // namespace cumret::cli
