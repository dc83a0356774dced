#pragma once

// Small locale-free text helpers shared by the parsers. Everything here
// treats input as raw bytes; only ASCII letters are case-folded.

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "fwn/error.hpp"

namespace fwn::detail {

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(s.substr(start));
            return fields;
        }
        fields.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Splits on runs of spaces, dropping empty fields (WNDB index files pad with
/// single spaces but this tolerates doubled ones).
inline std::vector<std::string_view> split_spaces(std::string_view s) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ') ++i;
        if (i > start) fields.push_back(s.substr(start, i - start));
    }
    return fields;
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || s.empty())
        throw ParseError(std::string(what) + " is not a non-negative integer: '" + std::string(s) + "'", line);
    return value;
}

/// Reads one line, stripping the trailing LF and an optional CR before it.
/// Returns false at end of stream. `line_no` is incremented on success.
inline bool read_line(std::istream& in, std::string& line, std::size_t& line_no) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
}

inline bool is_comment_or_blank(std::string_view line) {
    return line.empty() || line[0] == '#';
}

} // namespace fwn::detail
