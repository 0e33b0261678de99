#ifndef LIFTNET_RNG_HPP
#define LIFTNET_RNG_HPP

/**
 * @file rng.hpp
 * @brief Pinned sampling primitives on top of std::mt19937_64.
 *
 * The mt19937_64 output sequence is fully specified by the standard, but
 * std::shuffle and the distribution classes are not; any seeded result that
 * must reproduce across standard libraries goes through these helpers
 * instead.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace liftnet {

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n >= 1, via the multiply-shift bound map.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Standard normal deviate by Box-Muller (one value per call).
inline double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

/// Fisher-Yates shuffle using uniform_below.
template <class T>
void pinned_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace liftnet

#endif // LIFTNET_RNG_HPP
