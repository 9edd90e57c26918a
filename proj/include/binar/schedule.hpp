#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "binar/bits.hpp"
#include "binar/errors.hpp"

namespace binar {

/// SplitMix64. Deterministic, seedable, bit-exact across platforms; the sole
/// entropy source of the library (the shuffle core itself consumes none).
class rng64 {
public:
    explicit constexpr rng64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

struct schedule_entry {
    unsigned position;  ///< bit index, LSB = 0
    unsigned value;     ///< expected bit, 0 or 1

    bool operator==(const schedule_entry&) const = default;
};

/// Ordered (bit position, expected bit value) pairs over a word width.
///
/// Invariants, enforced at construction:
///   - 1 <= size() <= width() <= 64
///   - every position < width()
///   - positions pairwise distinct
///   - every value in {0, 1}
class bit_schedule {
public:
    bit_schedule(unsigned width, std::vector<schedule_entry> entries)
        : width_(width), entries_(std::move(entries)) {
        if (width_ == 0 || width_ > 64)
            throw std::invalid_argument("schedule width must be in [1, 64]");
        if (entries_.empty())
            throw std::invalid_argument("schedule must contain at least one entry");
        if (entries_.size() > width_)
            throw std::invalid_argument("schedule has more entries than bits in the width");
        std::uint64_t seen = 0;
        for (const auto& e : entries_) {
            if (e.position >= width_)
                throw std::invalid_argument("schedule position " + std::to_string(e.position) +
                                            " out of range for width " + std::to_string(width_));
            if (e.value > 1)
                throw std::invalid_argument("schedule value must be 0 or 1");
            const std::uint64_t bit = std::uint64_t{1} << e.position;
            if (seen & bit)
                throw std::invalid_argument("duplicate schedule position " +
                                            std::to_string(e.position));
            seen |= bit;
        }
    }

    unsigned width() const noexcept { return width_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<schedule_entry>& entries() const noexcept { return entries_; }
    const schedule_entry& operator[](std::size_t i) const { return entries_[i]; }

    bool operator==(const bit_schedule&) const = default;

private:
    unsigned width_;
    std::vector<schedule_entry> entries_;
};

/// Schedule with `bits` distinct random positions and random bit values.
///
/// Positions are the first `bits` entries of a Fisher-Yates-shuffled
/// [0..width-1] list driven by rng64(seed); values are the low bits of the
/// subsequent generator outputs. Deterministic per (width, bits, seed).
inline bit_schedule random_schedule(unsigned width, unsigned bits, std::uint64_t seed) {
    if (width == 0 || width > 64)
        throw std::invalid_argument("schedule width must be in [1, 64]");
    if (bits == 0 || bits > width)
        throw std::invalid_argument("bit count must be in [1, width]");
    rng64 rng(seed);
    std::vector<unsigned> pool(width);
    for (unsigned i = 0; i < width; ++i) pool[i] = i;
    for (std::size_t j = pool.size() - 1; j >= 1; --j) {
        const std::size_t u = static_cast<std::size_t>(rng.next() % (j + 1));
        std::swap(pool[j], pool[u]);
    }
    std::vector<schedule_entry> entries(bits);
    for (unsigned i = 0; i < bits; ++i) entries[i].position = pool[i];
    for (unsigned i = 0; i < bits; ++i)
        entries[i].value = static_cast<unsigned>(rng.next() & 1u);
    return bit_schedule(width, std::move(entries));
}

/// Schedule visiting positions 0,1,...,values.size()-1 (LSB upward) with the
/// given bit values.
inline bit_schedule reverse_schedule(unsigned width, unsigned bits,
                                     const std::vector<unsigned>& values) {
    if (values.size() != bits)
        throw std::invalid_argument("value list length does not match bit count");
    if (bits == 0 || bits > width)
        throw std::invalid_argument("bit count must be in [1, width]");
    std::vector<schedule_entry> entries(bits);
    for (unsigned i = 0; i < bits; ++i) entries[i] = {i, values[i]};
    return bit_schedule(width, std::move(entries));
}

struct schedule_diagnostics {
    bool is_encoding_order = false;          ///< positions width-1, width-2, ...
    bool is_reverse_encoding_order = false;  ///< positions 0, 1, ...
    bool constant_values = false;
    bool sort_risk = false;  ///< encoding order with constant values: provably sorts
    std::vector<std::string> warnings;
};

/// Diagnose a schedule for configurations that order rather than shuffle.
/// Never rejects; callers decide what to do with the flags.
inline schedule_diagnostics validate_schedule(const bit_schedule& schedule) {
    schedule_diagnostics d;
    const auto& es = schedule.entries();
    d.is_encoding_order = true;
    d.is_reverse_encoding_order = true;
    d.constant_values = true;
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (es[i].position != schedule.width() - 1 - i) d.is_encoding_order = false;
        if (es[i].position != i) d.is_reverse_encoding_order = false;
        if (es[i].value != es[0].value) d.constant_values = false;
    }
    d.sort_risk = d.is_encoding_order && d.constant_values;
    if (d.is_encoding_order)
        d.warnings.push_back("schedule follows the encoding order (MSB to LSB)");
    if (d.is_reverse_encoding_order)
        d.warnings.push_back("schedule follows the reverse encoding order (LSB to MSB)");
    if (d.constant_values)
        d.warnings.push_back("schedule bit values are constant");
    if (d.sort_risk)
        d.warnings.push_back(
            "schedule sorts instead of shuffling (encoding order with constant values)");
    return d;
}

/// Parse a schedule from `position,value` lines (LF newlines, 0-based decimal
/// positions, values 0 or 1). Throws parse_error naming the offending line.
inline bit_schedule read_schedule(std::istream& in, unsigned width) {
    if (width == 0 || width > 64)
        throw std::invalid_argument("schedule width must be in [1, 64]");
    std::vector<schedule_entry> entries;
    std::string line;
    std::size_t lineno = 0;
    std::uint64_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw parse_error("malformed schedule entry", lineno);
        const std::string_view pos_text(line.data(), comma);
        const std::string_view val_text(line.data() + comma + 1, line.size() - comma - 1);
        unsigned position = 0;
        auto [pp, pec] = std::from_chars(pos_text.data(), pos_text.data() + pos_text.size(), position);
        if (pec != std::errc{} || pp != pos_text.data() + pos_text.size())
            throw parse_error("malformed schedule entry", lineno);
        unsigned value = 0;
        auto [vp, vec] = std::from_chars(val_text.data(), val_text.data() + val_text.size(), value);
        if (vec != std::errc{} || vp != val_text.data() + val_text.size())
            throw parse_error("malformed schedule entry", lineno);
        if (position >= width) throw parse_error("position out of range", lineno);
        if (value > 1) throw parse_error("invalid bit value", lineno);
        if (seen & (std::uint64_t{1} << position))
            throw parse_error("duplicate position", lineno);
        seen |= std::uint64_t{1} << position;
        entries.push_back({position, value});
    }
    if (entries.empty()) throw parse_error("empty schedule file");
    return bit_schedule(width, std::move(entries));
}

inline void write_schedule(std::ostream& out, const bit_schedule& schedule) {
    for (const auto& e : schedule.entries())
        out << e.position << ',' << e.value << '\n';
}

inline bit_schedule read_schedule_file(const std::string& path, unsigned width) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open schedule file: " + path);
    return read_schedule(in, width);
}

inline void write_schedule_file(const std::string& path, const bit_schedule& schedule) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open schedule file for writing: " + path);
    write_schedule(out, schedule);
    out.flush();
    if (!out) throw std::runtime_error("failed writing schedule file: " + path);
}

/// Produces a fresh random schedule per call; the seed stream is owned here so
/// repeated draws are deterministic per source seed.
class schedule_source {
public:
    schedule_source(unsigned width, unsigned bits, std::uint64_t seed)
        : width_(width), bits_(bits), rng_(seed) {}

    bit_schedule next() { return random_schedule(width_, bits_, rng_.next()); }

    unsigned width() const noexcept { return width_; }
    unsigned bits() const noexcept { return bits_; }

private:
    unsigned width_;
    unsigned bits_;
    rng64 rng_;
};

}  // namespace binar
