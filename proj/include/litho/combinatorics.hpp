#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace litho {

/// Largest photon number for which factorials and binomials are evaluated
/// exactly (20! still fits in 64 bits).
inline constexpr unsigned kMaxPhotons = 20;

inline void require_photon_cutoff(unsigned n, const char* what) {
    if (n > kMaxPhotons) {
        throw std::out_of_range(std::string(what) + " = " + std::to_string(n) +
                                " exceeds the photon cutoff of " + std::to_string(kMaxPhotons));
    }
}

inline std::uint64_t factorial(unsigned n) {
    require_photon_cutoff(n, "factorial argument");
    std::uint64_t result = 1;
    for (unsigned i = 2; i <= n; ++i) result *= i;
    return result;
}

/// n! / (n - k)!, the squared ladder factor picked up by lowering |n> k times.
inline std::uint64_t falling_factorial(unsigned n, unsigned k) {
    require_photon_cutoff(n, "falling factorial argument");
    if (k > n) return 0;
    std::uint64_t result = 1;
    for (unsigned i = 0; i < k; ++i) result *= n - i;
    return result;
}

/// Exact binomial coefficient C(n, k) for 0 <= k <= n <= kMaxPhotons.
inline std::uint64_t binomial(unsigned n, unsigned k) {
    require_photon_cutoff(n, "binomial upper index");
    if (k > n) {
        throw std::out_of_range("binomial lower index " + std::to_string(k) +
                                " exceeds upper index " + std::to_string(n));
    }
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    // result * (n - i) is divisible by (i + 1) at every step
    for (unsigned i = 0; i < k; ++i) result = result * (n - i) / (i + 1);
    return result;
}

}  // namespace litho
