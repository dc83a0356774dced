#pragma once

// Locale-free decimal formatting and parsing for serialized output.
//
// All fractional values are printed with exactly 9 fractional digits,
// round-half-even, no exponent. The conversion is done in integer
// arithmetic on the significand so the result does not depend on the
// global locale, the FPU rounding mode, or printf tie-breaking.

#include <bit>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "fwn/error.hpp"

namespace fwn {

namespace detail {

// round_half_even(|x| * 10^9) as an integer. |x| must be < ~1.8e10.
inline std::uint64_t scaled_fixed9(double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const int biased = static_cast<int>((bits >> 52) & 0x7FF);
    const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
    if (biased == 0x7FF) throw Error("cannot format non-finite value");

    std::uint64_t m;
    int e2;
    if (biased == 0) {
        m = frac;
        e2 = -1074;
    } else {
        m = frac | (std::uint64_t{1} << 52);
        e2 = biased - 1075;
    }
    if (m == 0) return 0;

    // x * 10^9 = (m * 5^9) * 2^(e2+9); m*5^9 needs at most 74 bits.
    constexpr std::uint64_t five_pow9 = 1953125;
    constexpr unsigned __int128 limit = ~std::uint64_t{0};
    unsigned __int128 n = static_cast<unsigned __int128>(m) * five_pow9;
    const int s = e2 + 9;
    if (s >= 0) {
        if (s > 34 || (n << s) > limit)
            throw Error("value too large for fixed-point formatting");
        return static_cast<std::uint64_t>(n << s);
    }
    const int k = -s;
    if (k >= 128) return 0;
    unsigned __int128 q = n >> k;
    unsigned __int128 r = n - (q << k);
    unsigned __int128 half = static_cast<unsigned __int128>(1) << (k - 1);
    if (r > half || (r == half && (q & 1)))
        ++q;
    if (q > limit) throw Error("value too large for fixed-point formatting");
    return static_cast<std::uint64_t>(q);
}

} // namespace detail

/// `x` rendered as `[-]d.ddddddddd` (exactly 9 fractional digits).
inline std::string format_fixed9(double x) {
    const bool neg = x < 0.0;
    const std::uint64_t scaled = detail::scaled_fixed9(neg ? -x : x);
    const std::uint64_t whole = scaled / 1000000000u;
    const std::uint64_t fract = scaled % 1000000000u;

    std::string out;
    if (neg && scaled != 0) out.push_back('-');
    out += std::to_string(whole);
    out.push_back('.');
    std::string f = std::to_string(fract);
    out.append(9 - f.size(), '0');
    out += f;
    return out;
}

/// Locale-free strtod replacement; the whole string must be consumed.
inline double parse_number(std::string_view s, std::size_t line, const char* what) {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || s.empty())
        throw ParseError(std::string(what) + " is not a number: '" + std::string(s) + "'", line);
    return value;
}

} // namespace fwn
