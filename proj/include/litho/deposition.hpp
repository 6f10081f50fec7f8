#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "litho/combinatorics.hpp"
#include "litho/fock.hpp"

namespace litho {

namespace detail {

inline void require_absorption_order(unsigned photons) {
    if (photons == 0) throw std::invalid_argument("photon number N must be >= 1");
    require_photon_cutoff(photons, "photon number");
}

inline double inv_pow2(unsigned n) { return std::ldexp(1.0, -static_cast<int>(n)); }

}  // namespace detail

/// Half-open uniform grid of `samples` points on [lo, hi).
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("grid needs at least 2 samples");
    if (!(lo < hi)) throw std::invalid_argument("grid requires phi-min < phi-max");
    std::vector<double> grid(samples);
    const double step = (hi - lo) / static_cast<double>(samples);
    for (std::size_t i = 0; i < samples; ++i) grid[i] = lo + step * static_cast<double>(i);
    return grid;
}

/// Deposition rate sampled on a strictly increasing phase grid.
class DepositionCurve {
public:
    DepositionCurve(std::vector<double> phi, std::vector<double> values)
        : phi_(std::move(phi)), values_(std::move(values)) {
        if (phi_.size() != values_.size()) {
            throw std::invalid_argument("DepositionCurve: grid and value lengths differ");
        }
        for (std::size_t i = 1; i < phi_.size(); ++i) {
            if (!(phi_[i] > phi_[i - 1])) {
                throw std::invalid_argument("DepositionCurve: phase grid must be strictly increasing");
            }
        }
        for (double v : values_) {
            if (!(v >= 0.0)) throw std::invalid_argument("DepositionCurve: values must be >= 0");
        }
    }

    template <class Rate>
        requires std::is_invocable_r_v<double, Rate, double>
    static DepositionCurve sample(std::vector<double> phi, Rate&& rate) {
        std::vector<double> values;
        values.reserve(phi.size());
        for (double p : phi) values.push_back(std::invoke(rate, p));
        return DepositionCurve(std::move(phi), std::move(values));
    }

    std::span<const double> phi() const { return phi_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return phi_.size(); }

private:
    std::vector<double> phi_;
    std::vector<double> values_;
};

/// Maximally entangled (NOON) state: (1 + cos N phi) / 2^N.
inline double deposition_mes(unsigned photons, double phi) {
    detail::require_absorption_order(photons);
    return detail::inv_pow2(photons) * (1.0 + std::cos(photons * phi));
}

/// Nonmaximally entangled state cos g |N,0> + e^{iN phi} sin g |0,N>.
/// Any real angle is accepted so phase-dependent (local) angles can be fed in.
inline double deposition_nmes(unsigned photons, double gamma, double phi) {
    detail::require_absorption_order(photons);
    return detail::inv_pow2(photons) * (1.0 + std::sin(2.0 * gamma) * std::cos(photons * phi));
}

/// General split-m branch: C(N,m)/2^N * (1 + sin 2g cos[(N - 2m) phi + theta]).
inline double deposition_general(const NmesSpec& spec, double phi) {
    spec.validate();
    detail::require_absorption_order(spec.photons);
    const double frequency = static_cast<double>(spec.photons) - 2.0 * spec.split;
    return static_cast<double>(binomial(spec.photons, spec.split)) * detail::inv_pow2(spec.photons) *
           (1.0 + std::sin(2.0 * spec.entanglement_angle) *
                      std::cos(frequency * phi + spec.relative_phase));
}

/// Closed-form dosing matrix element between the split-m and split-m' branches
/// sharing N and g. The m = m' case reduces to deposition_general.
inline Complex matrix_element_general(unsigned photons, unsigned m, unsigned m_prime, double gamma,
                                      double theta_m, double theta_m_prime, double phi) {
    require_photon_cutoff(photons, "photon number");
    if (m > photons || m_prime > photons) {
        throw std::out_of_range("matrix element split index exceeds photon number");
    }
    const Complex i{0.0, 1.0};
    const double dm = static_cast<double>(m_prime) - static_cast<double>(m);
    const double cross = static_cast<double>(photons) - static_cast<double>(m) - static_cast<double>(m_prime);
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);
    const Complex bracket = c * c * std::exp(i * (dm * phi)) +
                            s * s * std::exp(i * (-dm * phi + theta_m_prime - theta_m)) +
                            0.5 * std::sin(2.0 * gamma) *
                                (std::exp(i * (cross * phi + theta_m_prime)) +
                                 std::exp(-i * (cross * phi + theta_m)));
    const double scale = detail::inv_pow2(photons) *
                         std::sqrt(static_cast<double>(binomial(photons, m)) *
                                   static_cast<double>(binomial(photons, m_prime)));
    return scale * bracket;
}

/// Locally entangled state with the resonant angle 2g = k N phi:
/// (2 + sin((k+1) N phi) + sin((k-1) N phi)) / 2^{N+1}.
inline double deposition_resonant(unsigned photons, unsigned order, double phi) {
    detail::require_absorption_order(photons);
    if (order == 0) throw std::invalid_argument("resonance order k must be >= 1");
    const double n = photons;
    const double k = order;
    return detail::inv_pow2(photons + 1) *
           (2.0 + std::sin((k + 1.0) * n * phi) + std::sin((k - 1.0) * n * phi));
}

/// The same rate obtained by substituting g = k N phi / 2 into deposition_nmes.
inline double deposition_resonant_substituted(unsigned photons, unsigned order, double phi) {
    if (order == 0) throw std::invalid_argument("resonance order k must be >= 1");
    return deposition_nmes(photons, 0.5 * order * photons * phi, phi);
}

// Resolution schemes --------------------------------------------------------

struct Classical {};
struct MaximallyEntangled {
    unsigned photons = 1;
};
struct Resonant {
    unsigned photons = 1;
    unsigned order = 1;
};

struct ResolutionScheme {
    std::variant<Classical, MaximallyEntangled, Resonant> kind;
    double wavelength = 1.0;

    void validate() const {
        if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be > 0");
        std::visit(
            [](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, MaximallyEntangled>) {
                    if (k.photons == 0) throw std::invalid_argument("photon number N must be >= 1");
                } else if constexpr (std::is_same_v<K, Resonant>) {
                    if (k.photons == 0) throw std::invalid_argument("photon number N must be >= 1");
                    if (k.order == 0) throw std::invalid_argument("resonance order k must be >= 1");
                }
            },
            kind);
    }
};

/// Rayleigh resolution: lambda/4 classically, lambda/(4N) for NOON light and
/// lambda/(4(k+1)N) under resonant local entanglement.
inline double effective_resolution(const ResolutionScheme& scheme) {
    scheme.validate();
    const double lambda = scheme.wavelength;
    return std::visit(
        [lambda](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Classical>) {
                return lambda / 4.0;
            } else if constexpr (std::is_same_v<K, MaximallyEntangled>) {
                return lambda / (4.0 * k.photons);
            } else {
                return lambda / (4.0 * (k.order + 1.0) * k.photons);
            }
        },
        scheme.kind);
}

}  // namespace litho
