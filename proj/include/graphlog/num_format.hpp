#ifndef GRAPHLOG_NUM_FORMAT_HPP
#define GRAPHLOG_NUM_FORMAT_HPP

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace graphlog {

// Shortest decimal that round-trips the exact double. Locale-independent.
inline std::string format_shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// 17 significant digits: also an exact round-trip, used for report output.
inline std::string format_17(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x,
                             std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace graphlog

#endif
