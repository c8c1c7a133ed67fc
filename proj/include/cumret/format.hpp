#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace cumret {

/// Shortest text that round-trips `value` (locale-independent, `.` separator).
inline std::string format_number(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Shortest round-tripping text in plain positional notation (no exponent).
inline std::string format_plain(double value)
{
    char buf[400];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

/// Full-field parse of a finite double; nullopt for anything else ("null", "", "1.2x", "nan").
inline std::optional<double> parse_finite(std::string_view text)
{
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || !(value - value == 0.0)) {
        return std::nullopt;
    }
    return value;
}

}  // namespace cumret
