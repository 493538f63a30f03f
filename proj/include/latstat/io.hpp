#pragma once

// Serialization helpers shared by the CLI and the tests: 17-significant-digit
// float formatting (guarantees round-trip) and exact parsing of plain decimal
// literals into rationals.

#include <cstdio>
#include <optional>
#include <string>

#include "latstat/rational.hpp"

namespace latstat {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Parses [+-]digits[.digits] into an exact rational. Exponents and anything
// with more than 18 total digits return nullopt (callers fall back to the
// float path).
inline std::optional<Rat> parse_decimal_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    int digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (ch < '0' || ch > '9') return std::nullopt;
        seen_digit = true;
        if (++digits > 18) return std::nullopt;
        num = num * 10 + (ch - '0');
        if (seen_dot) den *= 10;
    }
    if (!seen_digit) return std::nullopt;
    return Rat(neg ? -num : num, den);
}

} // namespace latstat
