#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "binar/schedule.hpp"

namespace binar {

template <typename S>
concept value_stream = requires(S s) {
    { s.next() } -> std::convertible_to<std::uint64_t>;
};

/// Stream that also knows its modulus (every output < modulus).
template <typename S>
concept modular_stream = value_stream<S> && requires(const S s) {
    { s.modulus() } -> std::convertible_to<std::uint64_t>;
};

/// Linear congruential generator: next state = (a * state + c) mod m.
/// Small-modulus instances serve as the deliberately poor generators the
/// stream shufflers condition.
class lcg {
public:
    lcg(std::uint64_t multiplier, std::uint64_t increment, std::uint64_t modulus,
        std::uint64_t seed)
        : mult_(multiplier), inc_(increment), mod_(modulus) {
        if (modulus < 2) throw std::invalid_argument("lcg modulus must be at least 2");
        state_ = seed % mod_;
    }

    std::uint64_t next() {
        state_ = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(mult_) * state_ + inc_) % mod_);
        return state_;
    }

    std::uint64_t modulus() const noexcept { return mod_; }
    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
    std::uint64_t mult_;
    std::uint64_t inc_;
    std::uint64_t mod_;
};

/// 0, 1, 2, ... — handy deterministic stream for tests and demos.
class counter_stream {
public:
    explicit counter_stream(std::uint64_t start = 0) noexcept : next_(start) {}
    std::uint64_t next() noexcept { return next_++; }

private:
    std::uint64_t next_;
};

/// In-place Fisher-Yates shuffle: for j from N-1 down to 1, exchange
/// elements[j] with elements[rng.next() mod (j+1)].
template <typename T>
void fisher_yates(std::span<T> elements, rng64& rng) {
    if (elements.size() < 2) return;
    for (std::size_t j = elements.size() - 1; j >= 1; --j) {
        const std::size_t u = static_cast<std::size_t>(rng.next() % (j + 1));
        std::swap(elements[j], elements[u]);
    }
}

namespace detail {

// floor(k * y / m); y < m required.
inline std::size_t table_index(std::uint64_t y, std::uint64_t m, std::size_t k) {
    return static_cast<std::size_t>(static_cast<unsigned __int128>(k) * y / m);
}

}  // namespace detail

/// Two-stream table shuffler: a k-slot buffer of X values, emission slots
/// selected by the scaled Y draw, refilled from X.
template <value_stream XStream, modular_stream YStream>
class algorithm_m_stream {
public:
    algorithm_m_stream(XStream x, YStream y, std::size_t k)
        : x_(std::move(x)), y_(std::move(y)) {
        if (k == 0) throw std::invalid_argument("table size k must be at least 1");
        table_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) table_.push_back(x_.next());
    }

    std::uint64_t next() {
        const std::uint64_t y = y_.next();
        const std::size_t j = detail::table_index(y, y_.modulus(), table_.size());
        const std::uint64_t out = table_[j];
        table_[j] = x_.next();
        return out;
    }

    std::size_t table_size() const noexcept { return table_.size(); }

private:
    XStream x_;
    YStream y_;
    std::vector<std::uint64_t> table_;
};

/// Single-stream variant: the previously emitted value selects the next slot.
/// Initialization consumes k table values plus one carry.
template <modular_stream XStream>
class bays_durham_stream {
public:
    bays_durham_stream(XStream x, std::size_t k) : x_(std::move(x)) {
        if (k == 0) throw std::invalid_argument("table size k must be at least 1");
        table_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) table_.push_back(x_.next());
        carry_ = x_.next();
    }

    std::uint64_t next() {
        const std::size_t j = detail::table_index(carry_, x_.modulus(), table_.size());
        carry_ = table_[j];
        table_[j] = x_.next();
        return carry_;
    }

    std::size_t table_size() const noexcept { return table_.size(); }

private:
    XStream x_;
    std::vector<std::uint64_t> table_;
    std::uint64_t carry_ = 0;
};

}  // namespace binar
