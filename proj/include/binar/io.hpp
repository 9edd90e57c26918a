#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binar/bits.hpp"
#include "binar/errors.hpp"

namespace binar {

/// Parse newline-delimited unsigned decimal integers, each checked to fit in
/// `width` bits. Throws parse_error naming the offending line. An empty
/// stream yields an empty vector.
inline std::vector<std::uint64_t> read_values(std::istream& in, unsigned width = 64) {
    if (width == 0 || width > 64)
        throw std::invalid_argument("width must be in [1, 64]");
    const std::uint64_t mask = width_mask<std::uint64_t>(width);
    std::vector<std::uint64_t> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec == std::errc::result_out_of_range || (ec == std::errc{} && v > mask))
            throw parse_error("value does not fit in " + std::to_string(width) + " bits",
                              lineno);
        if (ec != std::errc{} || p != line.data() + line.size())
            throw parse_error("invalid unsigned integer", lineno);
        values.push_back(v);
    }
    return values;
}

inline void write_values(std::ostream& out, std::span<const std::uint64_t> values) {
    for (const std::uint64_t v : values) out << v << '\n';
}

inline std::vector<std::uint64_t> read_values_file(const std::string& path,
                                                   unsigned width = 64) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return read_values(in, width);
}

inline void write_values_file(const std::string& path,
                              std::span<const std::uint64_t> values) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file for writing: " + path);
    write_values(out, values);
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace binar
