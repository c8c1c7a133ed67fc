#pragma once

// Published mean-trade-return and CAGR tables for four indices, shipped as a
// CSV fixture for side-by-side comparison. They are baselines, never expectations.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cumret::reference {

enum class TableKind { r_bar, cagr, cmv };

std::optional<TableKind> parse_table_kind(std::string_view text) noexcept;
std::string_view to_string(TableKind kind) noexcept;

struct ReferenceTables {
    std::map<std::string, std::map<std::string, double>> r_bar;  // rule -> index -> value
    std::map<std::string, std::map<std::string, double>> cagr;
    std::map<std::string, double> cmv;  // index -> value

    /// Every (rule, index) cell of both tables and every CMV cell present.
    bool complete() const;
};

/// Index columns of the published tables.
const std::array<std::string_view, 4>& indices() noexcept;

/// Row order of the published tables.
const std::array<std::string_view, 13>& rule_order() noexcept;

inline constexpr std::uint64_t kFixtureChecksum = 0xC1FC9E63AC5FBE84ULL;

/// Fixture text exactly as bundled.
std::string_view embedded_csv() noexcept;

/// FNV-1a 64 of embedded_csv().
std::uint64_t embedded_checksum() noexcept;

bool fixture_intact() noexcept;

/// Throws std::invalid_argument on malformed text.
ReferenceTables parse_reference_csv(std::string_view text);

/// Parsed fixture; throws std::runtime_error if the checksum does not match.
const ReferenceTables& bundled();

/// Published value, e.g. (r_bar, "KD", "DJIA") -> 0.0939. The CMV row is reachable
/// as (cmv, "CMV", index) or (cagr, "CMV", index). Throws std::invalid_argument for unknown keys.
double lookup_reference(TableKind table, std::string_view rule, std::string_view index);

/// Non-throwing variant for report assembly.
std::optional<double> find_reference(TableKind table, std::string_view rule, std::string_view index);

}  // namespace cumret::reference
