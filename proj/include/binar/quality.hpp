#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "binar/baselines.hpp"
#include "binar/schedule.hpp"
#include "binar/shuffle.hpp"

namespace binar {

namespace detail {

// Inversion count by merge sort; ties (equal values) are not inversions.
template <typename T>
std::uint64_t count_inversions(std::vector<T>& a, std::vector<T>& buf, std::size_t lo,
                               std::size_t hi) {
    if (hi - lo <= 1) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(a, buf, lo, mid) + count_inversions(a, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += mid - i;
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi),
              a.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

class fenwick {
public:
    explicit fenwick(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t i) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
    }

    // count of inserted indices <= i
    std::uint64_t prefix(std::size_t i) const {
        std::uint64_t s = 0;
        for (++i; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

private:
    std::vector<std::uint64_t> tree_;
};

template <typename T>
std::vector<std::size_t> dense_ranks(std::span<const T> elements) {
    std::vector<T> sorted(elements.begin(), elements.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> ranks(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i)
        ranks[i] = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), elements[i]) - sorted.begin());
    return ranks;
}

}  // namespace detail

/// Fraction of position pairs i < j with elements[i] <= elements[j].
/// 1.0 for ascending-sorted input, 0.0 for descending, near 0.5 when shuffled.
/// Ties count toward the <= side. Throws for fewer than two elements.
template <std::totally_ordered T>
double pairwise_balance(std::span<const T> elements) {
    const std::size_t n = elements.size();
    if (n < 2) throw std::invalid_argument("pairwise_balance needs at least 2 elements");
    std::vector<T> work(elements.begin(), elements.end());
    std::vector<T> buf(n);
    const std::uint64_t inversions = detail::count_inversions(work, buf, 0, n);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return static_cast<double>(total - inversions) / static_cast<double>(total);
}

/// Fraction of position triples i < j < k with elements[i] < elements[j] <
/// elements[k], counted exactly over all triples. Expected 1/6 for a uniform
/// random permutation of distinct values. Throws for fewer than 3 elements.
template <std::totally_ordered T>
double ordered_triple_fraction(std::span<const T> elements) {
    const std::size_t n = elements.size();
    if (n < 3) throw std::invalid_argument("ordered_triple_fraction needs at least 3 elements");
    const auto ranks = detail::dense_ranks(elements);
    // ascending triples through j = (smaller before j) * (greater after j)
    std::vector<std::uint64_t> smaller_left(n);
    detail::fenwick left(n);
    for (std::size_t j = 0; j < n; ++j) {
        smaller_left[j] = ranks[j] > 0 ? left.prefix(ranks[j] - 1) : 0;
        left.add(ranks[j]);
    }
    detail::fenwick right(n);
    std::uint64_t triples = 0;
    for (std::size_t j = n; j-- > 0;) {
        const std::uint64_t inserted = n - 1 - j;
        const std::uint64_t greater_right = inserted - right.prefix(ranks[j]);
        triples += smaller_left[j] * greater_right;
        right.add(ranks[j]);
    }
    const std::uint64_t total =
        static_cast<std::uint64_t>(n) * (n - 1) / 2 * (n - 2) / 3;
    return static_cast<double>(triples) / static_cast<double>(total);
}

struct displacement_result {
    std::uint64_t fixed_points = 0;
    double mean_displacement = 0.0;
};

/// Elements ending at their original index, and the mean absolute index
/// distance moved. `shuffled` must be a permutation of `original`, elements
/// distinct.
template <std::totally_ordered T>
displacement_result displacement_metrics(std::span<const T> original,
                                         std::span<const T> shuffled) {
    if (original.size() != shuffled.size())
        throw std::invalid_argument("shuffled is not a permutation of original");
    const std::size_t n = original.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return original[a] < original[b]; });
    std::vector<T> sorted_vals(n);
    for (std::size_t i = 0; i < n; ++i) sorted_vals[i] = original[order[i]];
    for (std::size_t i = 1; i < n; ++i)
        if (!(sorted_vals[i - 1] < sorted_vals[i]))
            throw std::invalid_argument("displacement_metrics requires distinct elements");

    displacement_result result;
    std::uint64_t total_distance = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto it =
            std::lower_bound(sorted_vals.begin(), sorted_vals.end(), shuffled[i]);
        if (it == sorted_vals.end() || *it != shuffled[i])
            throw std::invalid_argument("shuffled is not a permutation of original");
        const std::size_t from = order[static_cast<std::size_t>(it - sorted_vals.begin())];
        if (from == i) ++result.fixed_points;
        total_distance += from > i ? from - i : i - from;
    }
    result.mean_displacement =
        n == 0 ? 0.0 : static_cast<double>(total_distance) / static_cast<double>(n);
    return result;
}

/// Shuffledness summary of one arrangement measured against a reference
/// (original) arrangement of the same distinct elements.
struct permutation_metrics {
    double pairwise_balance = 0.0;
    double ordered_triple_fraction = 0.0;
    std::uint64_t fixed_points = 0;
    double mean_displacement = 0.0;
};

template <std::totally_ordered T>
permutation_metrics analyze_permutation(std::span<const T> original,
                                        std::span<const T> shuffled) {
    permutation_metrics m;
    m.pairwise_balance = pairwise_balance(shuffled);
    m.ordered_triple_fraction =
        shuffled.size() >= 3 ? ordered_triple_fraction(shuffled)
                             : std::numeric_limits<double>::quiet_NaN();
    const auto d = displacement_metrics(original, shuffled);
    m.fixed_points = d.fixed_points;
    m.mean_displacement = d.mean_displacement;
    return m;
}

// ---------------------------------------------------------------------------
// Permutation ranking (factorial number system)

inline constexpr std::uint64_t factorial(unsigned n) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Rank of a permutation of distinct values in [0, n!-1]; identity => 0,
/// reverse-sorted => n!-1. Supports n <= 20.
template <std::totally_ordered T>
std::uint64_t lehmer_rank(std::span<const T> permutation) {
    const std::size_t n = permutation.size();
    if (n > 20) throw std::invalid_argument("lehmer_rank supports at most 20 elements");
    const auto ranks = detail::dense_ranks(permutation);
    std::uint64_t rank = 0;
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t smaller_unused = 0;
        for (std::size_t r = 0; r < ranks[i]; ++r)
            if (!used[r]) ++smaller_unused;
        used[ranks[i]] = true;
        rank += smaller_unused * factorial(static_cast<unsigned>(n - 1 - i));
    }
    return rank;
}

/// Permutation of [0..n-1] with the given Lehmer rank.
inline std::vector<unsigned> lehmer_unrank(std::uint64_t rank, unsigned n) {
    if (n > 20) throw std::invalid_argument("lehmer_unrank supports at most 20 elements");
    if (rank >= factorial(n)) throw std::invalid_argument("rank out of range");
    std::vector<unsigned> items(n);
    for (unsigned i = 0; i < n; ++i) items[i] = i;
    std::vector<unsigned> out;
    out.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        const std::uint64_t f = factorial(n - 1 - i);
        const std::size_t idx = static_cast<std::size_t>(rank / f);
        rank %= f;
        out.push_back(items[idx]);
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Permutation distribution over repeated shuffles

enum class report_algorithm { binar_random_schedules, fisher_yates };

struct distribution_report {
    unsigned n = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> histogram;  ///< n! bins, Lehmer-indexed
    double chi_square = 0.0;
    std::uint64_t sorted_hits = 0;
    std::uint64_t reverse_sorted_hits = 0;
    double mean_pairwise_balance = 0.0;
    double mean_ordered_triple_fraction = 0.0;  ///< NaN when n < 3
    double mean_fixed_points = 0.0;
    double mean_displacement = 0.0;
};

/// Shuffle the ascending array [0..n-1] `trials` times and histogram the
/// resulting permutations. The binar algorithm draws a fresh width-8, 8-bit
/// random schedule per trial (seed + trial index); Fisher-Yates reseeds its
/// generator the same way, so trials are order-independent.
inline distribution_report run_distribution_report(report_algorithm algorithm, unsigned n,
                                                   std::uint64_t trials, std::uint64_t seed) {
    if (n < 2 || n > 8)
        throw std::invalid_argument("distribution report supports n in [2, 8]");
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");

    distribution_report report;
    report.n = n;
    report.trials = trials;
    report.histogram.assign(factorial(n), 0);

    std::vector<std::uint8_t> original(n);
    for (unsigned i = 0; i < n; ++i) original[i] = static_cast<std::uint8_t>(i);

    double sum_balance = 0.0, sum_triples = 0.0, sum_disp = 0.0;
    std::uint64_t sum_fixed = 0;
    std::vector<std::uint8_t> arr(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        arr = original;
        if (algorithm == report_algorithm::binar_random_schedules) {
            const bit_schedule sched = random_schedule(8, 8, seed + t);
            binar_shuffle(std::span<std::uint8_t>(arr), sched);
        } else {
            rng64 rng(seed + t);
            fisher_yates(std::span<std::uint8_t>(arr), rng);
        }
        ++report.histogram[lehmer_rank(std::span<const std::uint8_t>(arr))];
        sum_balance += pairwise_balance(std::span<const std::uint8_t>(arr));
        if (n >= 3) sum_triples += ordered_triple_fraction(std::span<const std::uint8_t>(arr));
        const auto d = displacement_metrics(std::span<const std::uint8_t>(original),
                                            std::span<const std::uint8_t>(arr));
        sum_fixed += d.fixed_points;
        sum_disp += d.mean_displacement;
    }

    report.sorted_hits = report.histogram.front();
    report.reverse_sorted_hits = report.histogram.back();
    const double expected =
        static_cast<double>(trials) / static_cast<double>(report.histogram.size());
    double chi = 0.0;
    for (const std::uint64_t count : report.histogram) {
        const double d = static_cast<double>(count) - expected;
        chi += d * d / expected;
    }
    report.chi_square = chi;
    const double tf = static_cast<double>(trials);
    report.mean_pairwise_balance = sum_balance / tf;
    report.mean_ordered_triple_fraction =
        n >= 3 ? sum_triples / tf : std::numeric_limits<double>::quiet_NaN();
    report.mean_fixed_points = static_cast<double>(sum_fixed) / tf;
    report.mean_displacement = sum_disp / tf;
    return report;
}

// ---------------------------------------------------------------------------
// Re-shuffle controller

struct reshuffle_thresholds {
    double balance_lo = 0.4;
    double balance_hi = 0.6;
    double max_ordered_triple_fraction = 0.3;
    unsigned max_rounds = 8;
};

struct reshuffle_outcome {
    unsigned rounds = 0;
    bool converged = false;
    double pairwise_balance = 0.0;
    double ordered_triple_fraction = 0.0;
};

/// Shuffle with fresh schedules until the metrics land inside the thresholds
/// or max_rounds is spent. Each round re-shuffles the current permutation.
/// On exhaustion the best-seen arrangement (smallest distance to the
/// threshold region) is restored and converged is false.
template <word T>
reshuffle_outcome reshuffle_controller(std::span<T> elements, schedule_source& schedules,
                                       const reshuffle_thresholds& thresholds) {
    if (thresholds.max_rounds < 1)
        throw std::invalid_argument("max_rounds must be at least 1");
    if (elements.size() < 3)
        throw std::invalid_argument("reshuffle controller needs at least 3 elements");

    const auto badness = [&](double balance, double triples) {
        double b = 0.0;
        if (balance < thresholds.balance_lo) b += thresholds.balance_lo - balance;
        if (balance > thresholds.balance_hi) b += balance - thresholds.balance_hi;
        if (triples > thresholds.max_ordered_triple_fraction)
            b += triples - thresholds.max_ordered_triple_fraction;
        return b;
    };

    std::vector<T> best;
    double best_badness = std::numeric_limits<double>::infinity();
    reshuffle_outcome best_outcome;

    for (unsigned round = 1; round <= thresholds.max_rounds; ++round) {
        const bit_schedule sched = schedules.next();
        binar_shuffle(elements, sched);
        const double balance = pairwise_balance(std::span<const T>(elements));
        const double triples = ordered_triple_fraction(std::span<const T>(elements));
        const double b = badness(balance, triples);
        if (b == 0.0)
            return {round, true, balance, triples};
        if (b < best_badness) {
            best_badness = b;
            best.assign(elements.begin(), elements.end());
            best_outcome = {round, false, balance, triples};
        }
    }
    std::copy(best.begin(), best.end(), elements.begin());
    best_outcome.rounds = thresholds.max_rounds;
    return best_outcome;
}

// ---------------------------------------------------------------------------
// Report documents

namespace detail {

inline void write_number(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << buf;
}

}  // namespace detail

/// key: value lines for a single analyzed arrangement.
inline void render_metrics_report(std::ostream& out, std::size_t n,
                                  const permutation_metrics& m) {
    out << "n: " << n << '\n';
    out << "pairwise_balance: ";
    detail::write_number(out, m.pairwise_balance);
    out << '\n';
    if (!std::isnan(m.ordered_triple_fraction)) {
        out << "ordered_triple_fraction: ";
        detail::write_number(out, m.ordered_triple_fraction);
        out << '\n';
    }
    out << "fixed_points: " << m.fixed_points << '\n';
    out << "mean_displacement: ";
    detail::write_number(out, m.mean_displacement);
    out << '\n';
}

/// key: value lines plus the Lehmer-indexed histogram block.
inline void render_distribution_report(std::ostream& out, const distribution_report& r) {
    out << "n: " << r.n << '\n';
    out << "trials: " << r.trials << '\n';
    out << "chi_square: ";
    detail::write_number(out, r.chi_square);
    out << '\n';
    out << "sorted_hits: " << r.sorted_hits << '\n';
    out << "reverse_sorted_hits: " << r.reverse_sorted_hits << '\n';
    out << "pairwise_balance: ";
    detail::write_number(out, r.mean_pairwise_balance);
    out << '\n';
    if (!std::isnan(r.mean_ordered_triple_fraction)) {
        out << "ordered_triple_fraction: ";
        detail::write_number(out, r.mean_ordered_triple_fraction);
        out << '\n';
    }
    out << "fixed_points: ";
    detail::write_number(out, r.mean_fixed_points);
    out << '\n';
    out << "mean_displacement: ";
    detail::write_number(out, r.mean_displacement);
    out << '\n';
    out << "histogram:\n";
    for (std::size_t i = 0; i < r.histogram.size(); ++i)
        out << i << ' ' << r.histogram[i] << '\n';
}

}  // namespace binar
