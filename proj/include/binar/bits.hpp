#pragma once

#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>

namespace binar {

/// Element types the shuffle operates on: fixed-width unsigned words.
template <typename T>
concept word = std::unsigned_integral<T> && !std::same_as<T, bool>;

template <word T>
inline constexpr unsigned word_bits = static_cast<unsigned>(std::numeric_limits<T>::digits);

/// Value of the bit at `position` (LSB = position 0), normalized to 0 or 1.
/// Throws std::out_of_range when position >= width.
template <word T>
constexpr unsigned extract_bit(T x, unsigned position, unsigned width = word_bits<T>) {
    if (position >= width || width > word_bits<T>)
        throw std::out_of_range("bit position " + std::to_string(position) +
                                " out of range for width " + std::to_string(width));
    return static_cast<unsigned>((x >> position) & T{1});
}

/// Largest value representable in `width` bits of T, as an inclusive mask.
template <word T>
constexpr T width_mask(unsigned width) {
    if (width == 0 || width > word_bits<T>)
        throw std::invalid_argument("width must be in [1, " + std::to_string(word_bits<T>) + "]");
    if (width == word_bits<T>) return static_cast<T>(~T{0});
    return static_cast<T>((T{1} << width) - T{1});
}

}  // namespace binar
