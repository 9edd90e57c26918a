#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <ratio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binar/baselines.hpp"
#include "binar/schedule.hpp"
#include "binar/shuffle.hpp"

namespace binar {

enum class data_order { ascending, descending };

inline const char* to_string(data_order order) {
    return order == data_order::ascending ? "ascending" : "descending";
}

struct bench_record {
    std::size_t size = 0;
    data_order order = data_order::ascending;
    unsigned trial = 0;
    double seconds = 0.0;  ///< wall-clock duration of the shuffle call only
};

struct bench_fit {
    double slope = 0.0;      ///< seconds per element
    double intercept = 0.0;  ///< seconds
    double r_squared = 0.0;
    std::vector<double> ratios;  ///< time(2N)/time(N) for available size pairs
};

/// Ordered 32-bit data set: ascending [0..size-1] or its reverse. Elements
/// unique and non-repeated.
inline std::vector<std::uint32_t> generate_dataset(std::size_t size, data_order order) {
    if (size == 0) throw std::invalid_argument("dataset size must be positive");
    std::vector<std::uint32_t> data(size);
    if (order == data_order::ascending)
        for (std::size_t i = 0; i < size; ++i) data[i] = static_cast<std::uint32_t>(i);
    else
        for (std::size_t i = 0; i < size; ++i)
            data[i] = static_cast<std::uint32_t>(size - 1 - i);
    return data;
}

enum class bench_algorithm { binar_shuffle, fisher_yates };

namespace detail {

// Every value 0..size-1 exactly once; the generated multisets make this check
// linear instead of a sort.
inline void check_permutation_of_iota(std::span<const std::uint32_t> data) {
    std::vector<bool> seen(data.size(), false);
    for (const std::uint32_t v : data) {
        if (v >= data.size() || seen[v])
            throw std::runtime_error("benchmark output is not a permutation of its input");
        seen[v] = true;
    }
}

}  // namespace detail

/// Run the timing protocol: for every (size, order, trial) generate a fresh
/// ordered data set and time the shuffle call alone. Each output is verified
/// (outside the timed region) to be a permutation of the input; a failure
/// aborts the run. Strictly sequential.
///
/// Clock must be monotonic with resolution of 1 ms or better; otherwise sizes
/// below 200,000 are refused.
template <class Clock = std::chrono::steady_clock>
std::vector<bench_record> run_bench(std::span<const std::size_t> sizes,
                                    std::span<const data_order> orders, unsigned trials,
                                    const bit_schedule& schedule,
                                    bench_algorithm algorithm = bench_algorithm::binar_shuffle,
                                    std::uint64_t rng_seed = 1) {
    static_assert(Clock::is_steady, "benchmark clock must be monotonic");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    constexpr bool coarse_clock =
        std::ratio_greater<typename Clock::period, std::milli>::value;
    if (coarse_clock)
        for (const std::size_t size : sizes)
            if (size < 200000)
                throw std::invalid_argument(
                    "clock resolution is coarser than 1 ms; sizes below 200,000 refused");

    std::vector<bench_record> records;
    records.reserve(sizes.size() * orders.size() * trials);
    std::uint64_t run_index = 0;
    // trial-major so slow clock/scheduler drift spreads across each cell's
    // trials instead of polluting all of them at once
    for (unsigned trial = 0; trial < trials; ++trial) {
        for (const std::size_t size : sizes) {
            for (const data_order order : orders) {
                std::vector<std::uint32_t> data = generate_dataset(size, order);
                rng64 rng(rng_seed + run_index++);
                const auto start = Clock::now();
                if (algorithm == bench_algorithm::binar_shuffle)
                    binar_shuffle(std::span<std::uint32_t>(data), schedule);
                else
                    fisher_yates(std::span<std::uint32_t>(data), rng);
                const auto stop = Clock::now();
                detail::check_permutation_of_iota(data);
                const double seconds =
                    std::chrono::duration<double>(stop - start).count();
                records.push_back({size, order, trial, seconds});
            }
        }
    }
    return records;
}

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Per-(size, order) medians over trials, grouped for fitting and plotting.
inline std::map<std::pair<std::size_t, data_order>, double> median_seconds(
    std::span<const bench_record> records) {
    std::map<std::pair<std::size_t, data_order>, std::vector<double>> groups;
    for (const auto& r : records) groups[{r.size, r.order}].push_back(r.seconds);
    std::map<std::pair<std::size_t, data_order>, double> medians;
    for (auto& [key, vals] : groups) medians[key] = detail::median(std::move(vals));
    return medians;
}

/// Ordinary least squares of median seconds against size, plus the
/// time(2N)/time(N) doubling ratios per order. Needs at least 3 distinct
/// sizes. r_squared is 1 for a degenerate (constant) response.
inline bench_fit fit_linear(std::span<const bench_record> records) {
    const auto medians = median_seconds(records);
    std::vector<std::size_t> distinct_sizes;
    for (const auto& [key, _] : medians) distinct_sizes.push_back(key.first);
    std::sort(distinct_sizes.begin(), distinct_sizes.end());
    distinct_sizes.erase(std::unique(distinct_sizes.begin(), distinct_sizes.end()),
                         distinct_sizes.end());
    if (distinct_sizes.size() < 3)
        throw std::invalid_argument("linear fit needs at least 3 distinct sizes");

    double sum_x = 0, sum_y = 0;
    for (const auto& [key, sec] : medians) {
        sum_x += static_cast<double>(key.first);
        sum_y += sec;
    }
    const double n = static_cast<double>(medians.size());
    const double mean_x = sum_x / n, mean_y = sum_y / n;
    double sxx = 0, sxy = 0;
    for (const auto& [key, sec] : medians) {
        const double dx = static_cast<double>(key.first) - mean_x;
        sxx += dx * dx;
        sxy += dx * (sec - mean_y);
    }
    bench_fit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double ss_res = 0, ss_tot = 0;
    for (const auto& [key, sec] : medians) {
        const double predicted = fit.intercept + fit.slope * static_cast<double>(key.first);
        ss_res += (sec - predicted) * (sec - predicted);
        ss_tot += (sec - mean_y) * (sec - mean_y);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;

    for (const data_order order : {data_order::ascending, data_order::descending}) {
        for (const std::size_t size : distinct_sizes) {
            const auto lo = medians.find({size, order});
            const auto hi = medians.find({size * 2, order});
            if (lo != medians.end() && hi != medians.end() && lo->second > 0.0)
                fit.ratios.push_back(hi->second / lo->second);
        }
    }
    return fit;
}

/// CSV: header size,order,trial,seconds; seconds with 9 fractional digits.
inline void write_csv(std::ostream& out, std::span<const bench_record> records) {
    out << "size,order,trial,seconds\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.9f", r.seconds);
        out << r.size << ',' << to_string(r.order) << ',' << r.trial << ',' << buf << '\n';
    }
}

/// Two-column plot data: size <TAB> median seconds across all records of the
/// size, one line per size, ascending.
inline void write_plot(std::ostream& out, std::span<const bench_record> records) {
    std::map<std::size_t, std::vector<double>> by_size;
    for (const auto& r : records) by_size[r.size].push_back(r.seconds);
    char buf[64];
    for (auto& [size, vals] : by_size) {
        std::snprintf(buf, sizeof buf, "%.9f", detail::median(std::move(vals)));
        out << size << '\t' << buf << '\n';
    }
}

}  // namespace binar
