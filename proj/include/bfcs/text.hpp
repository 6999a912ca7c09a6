#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "bfcs/errors.hpp"

namespace bfcs {

// Value formatted with `digits` significant digits (printf %g rules).
inline std::string format_sig(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_exact(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Locale-independent double parse; the whole field must be consumed.
// `where` names the offending cell in the error message.
inline double parse_double(std::string_view field, const std::string& where) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DataError("non-numeric cell at " + where + ": '" + std::string(field) + "'");
    }
    return value;
}

inline long long parse_int(std::string_view field, const std::string& where) {
    long long value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DataError("non-integer cell at " + where + ": '" + std::string(field) + "'");
    }
    return value;
}

// Tab wins over comma so TSV files may carry commas inside names.
inline char sniff_separator(std::string_view header) {
    if (header.find('\t') != std::string_view::npos) return '\t';
    return ',';
}

}  // namespace bfcs
