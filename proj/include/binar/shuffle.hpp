#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "binar/bits.hpp"
#include "binar/schedule.hpp"

namespace binar {

/// Instrumentation counters accumulated across one shuffle call.
struct shuffle_stats {
    std::uint64_t bit_extractions = 0;
    /// Exchange operations, including degenerate self-exchanges when the
    /// working element and the upper-bound element coincide.
    std::uint64_t swaps = 0;
    /// Schedule levels consumed on the deepest partitioned path; 0 when no
    /// partition ran (N <= 1).
    std::uint32_t max_recursion_depth = 0;
    /// Partition levels that produced a single sub-array.
    std::uint64_t pass_throughs = 0;

    bool operator==(const shuffle_stats&) const = default;
};

namespace detail {

// One partition sweep over the inclusive segment [lo_bound, hi_bound].
// Elements whose scheduled bit equals the expected value collect at the lower
// bound; mismatches are exchanged with the element at the upper bound, which
// then shrinks. Returns the split index: [lo_bound, split) match, [split,
// hi_bound] do not. Exactly segment-size bit extractions.
template <word T>
std::size_t partition_segment(T* a, std::size_t lo_bound, std::size_t hi_bound,
                              schedule_entry entry, shuffle_stats& stats) {
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(lo_bound);
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(hi_bound);
    const unsigned position = entry.position;
    const unsigned want = entry.value;
    // the window shrinks by one per step: exactly segment-size extractions
    stats.bit_extractions += hi_bound - lo_bound + 1;
    while (lo < hi + 1) {
        const unsigned bit = static_cast<unsigned>((a[lo] >> position) & T{1});
        if (bit == want) {
            ++lo;
        } else {
            std::swap(a[lo], a[hi]);
            ++stats.swaps;
            --hi;
        }
    }
    return static_cast<std::size_t>(lo);
}

template <word T>
void check_fit(std::span<const T> elements, const bit_schedule& schedule) {
    if (schedule.width() > word_bits<T>)
        throw std::invalid_argument("schedule width exceeds element word size");
    if (schedule.width() == word_bits<T>) return;
    const T limit = static_cast<T>(T{1} << schedule.width());
    for (const T v : elements)
        if (v >= limit)
            throw std::invalid_argument("element does not fit in schedule width");
}

template <word T>
void shuffle_recurse(T* a, std::size_t lo_bound, std::size_t hi_bound, std::size_t level,
                     const std::vector<schedule_entry>& entries, shuffle_stats& stats) {
    if (level == entries.size() || lo_bound >= hi_bound) return;
    stats.max_recursion_depth =
        std::max(stats.max_recursion_depth, static_cast<std::uint32_t>(level + 1));
    const std::size_t split = partition_segment(a, lo_bound, hi_bound, entries[level], stats);
    if (split == lo_bound || split == hi_bound + 1) {
        ++stats.pass_throughs;
        shuffle_recurse(a, lo_bound, hi_bound, level + 1, entries, stats);
    } else {
        shuffle_recurse(a, lo_bound, split - 1, level + 1, entries, stats);
        shuffle_recurse(a, split, hi_bound, level + 1, entries, stats);
    }
}

}  // namespace detail

/// In-place partition sweep; see detail::partition_segment for the contract.
/// Validates bounds and the entry position against `width`.
template <word T>
std::size_t partition_pass(std::span<T> elements, std::size_t lo_bound, std::size_t hi_bound,
                           schedule_entry entry, unsigned width = word_bits<T>,
                           shuffle_stats* stats = nullptr) {
    if (lo_bound > hi_bound || hi_bound >= elements.size())
        throw std::out_of_range("partition bounds out of range");
    if (entry.position >= width || width > word_bits<T>)
        throw std::out_of_range("schedule position out of range for width");
    if (entry.value > 1) throw std::invalid_argument("schedule value must be 0 or 1");
    shuffle_stats local;
    shuffle_stats& st = stats ? *stats : local;
    return detail::partition_segment(elements.data(), lo_bound, hi_bound, entry, st);
}

/// Shuffle `elements` in place by recursive bit-schedule partitioning.
///
/// Deterministic in (elements, schedule). Recursion ends at schedule
/// exhaustion or sub-arrays of at most one element; a level that yields a
/// single sub-array continues with one call at the next schedule entry.
/// Arrays of fewer than two elements return unchanged without reading the
/// schedule entries.
template <word T>
shuffle_stats binar_shuffle(std::span<T> elements, const bit_schedule& schedule) {
    detail::check_fit(std::span<const T>(elements), schedule);
    shuffle_stats stats;
    if (elements.size() < 2) return stats;
    detail::shuffle_recurse(elements.data(), 0, elements.size() - 1, 0, schedule.entries(),
                            stats);
    return stats;
}

/// Work-list variant of binar_shuffle. Processes segments in the recursive
/// variant's depth-first, lower-sub-array-first order, so outputs and stats
/// are identical.
template <word T>
shuffle_stats binar_shuffle_iterative(std::span<T> elements, const bit_schedule& schedule) {
    detail::check_fit(std::span<const T>(elements), schedule);
    shuffle_stats stats;
    if (elements.size() < 2) return stats;

    struct work_item {
        std::size_t lo, hi, level;
    };
    const auto& entries = schedule.entries();
    std::vector<work_item> pending;
    pending.push_back({0, elements.size() - 1, 0});
    T* a = elements.data();
    while (!pending.empty()) {
        const work_item item = pending.back();
        pending.pop_back();
        if (item.level == entries.size() || item.lo >= item.hi) continue;
        stats.max_recursion_depth =
            std::max(stats.max_recursion_depth, static_cast<std::uint32_t>(item.level + 1));
        const std::size_t split =
            detail::partition_segment(a, item.lo, item.hi, entries[item.level], stats);
        if (split == item.lo || split == item.hi + 1) {
            ++stats.pass_throughs;
            pending.push_back({item.lo, item.hi, item.level + 1});
        } else {
            // upper first so the lower segment pops next
            pending.push_back({split, item.hi, item.level + 1});
            pending.push_back({item.lo, split - 1, item.level + 1});
        }
    }
    return stats;
}

/// Transformed key: the schedule-length bit string whose j-th most significant
/// bit is the element's scheduled bit XOR the scheduled value. The shuffle
/// equals an ascending sort by this key whenever the key is injective.
template <word T>
std::uint64_t tau_key(T x, const bit_schedule& schedule) {
    std::uint64_t key = 0;
    for (const auto& e : schedule.entries())
        key = (key << 1) | (extract_bit(x, e.position, schedule.width()) ^ e.value);
    return key;
}

}  // namespace binar
