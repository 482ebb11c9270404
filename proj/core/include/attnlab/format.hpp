#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace attnlab {

// Shortest decimal form that parses back to exactly the same double. Used for
// every float we persist, so re-importing a CSV or JSON file reproduces the
// recorded values bit for bit.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw std::invalid_argument("bad float: " + s);
    return v;
}

}  // namespace attnlab
