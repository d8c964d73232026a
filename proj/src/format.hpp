#pragma once

#include <charconv>
#include <string>

namespace modeswitch::detail {

// Fixed-point text, locale independent.
inline std::string fixed(double value, int decimals) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return "nan";
    std::string out(buf, end);
    // -0.0000 reads badly in tables
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

inline std::string percent(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

} // namespace modeswitch::detail
