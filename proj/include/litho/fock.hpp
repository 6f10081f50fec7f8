#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "litho/combinatorics.hpp"

namespace litho {

using Complex = std::complex<double>;

/// Occupation numbers of the two beams, mode a first.
struct Occupation {
    unsigned a = 0;
    unsigned b = 0;

    constexpr unsigned total() const { return a + b; }
    constexpr auto operator<=>(const Occupation&) const = default;
};

/// Amplitudes below this magnitude are dropped after operator application.
inline constexpr double kDefaultPruneThreshold = 1e-15;

/// Sparse two-mode Fock state: a finite map from occupation pairs to complex
/// amplitudes. Not necessarily normalized. Ordered storage keeps iteration,
/// and therefore every derived floating-point sum, deterministic.
class TwoModeFockState {
public:
    using AmplitudeMap = std::map<Occupation, Complex>;

    TwoModeFockState() = default;

    static TwoModeFockState basis(unsigned a, unsigned b, Complex amplitude = 1.0) {
        TwoModeFockState state;
        state.add({a, b}, amplitude);
        return state;
    }

    /// Accumulates `amplitude` onto the given occupation pair.
    TwoModeFockState& add(Occupation occupation, Complex amplitude) {
        amplitudes_[occupation] += amplitude;
        return *this;
    }

    Complex amplitude(Occupation occupation) const {
        auto it = amplitudes_.find(occupation);
        return it == amplitudes_.end() ? Complex{} : it->second;
    }

    const AmplitudeMap& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return amplitudes_.size(); }
    bool empty() const { return amplitudes_.empty(); }

    double squared_norm() const {
        double sum = 0.0;
        for (const auto& [occ, amp] : amplitudes_) sum += std::norm(amp);
        return sum;
    }

    /// Largest total photon number in the support (0 for the zero state).
    unsigned max_photons() const {
        unsigned best = 0;
        for (const auto& [occ, amp] : amplitudes_) best = std::max(best, occ.total());
        return best;
    }

    /// <this|other>, antilinear in `this`.
    Complex inner(const TwoModeFockState& other) const {
        Complex sum{};
        for (const auto& [occ, amp] : amplitudes_) {
            sum += std::conj(amp) * other.amplitude(occ);
        }
        return sum;
    }

    TwoModeFockState pruned(double threshold) const {
        TwoModeFockState out;
        for (const auto& [occ, amp] : amplitudes_) {
            if (std::abs(amp) >= threshold) out.amplitudes_.emplace(occ, amp);
        }
        return out;
    }

    friend TwoModeFockState operator+(TwoModeFockState lhs, const TwoModeFockState& rhs) {
        for (const auto& [occ, amp] : rhs.amplitudes_) lhs.add(occ, amp);
        return lhs;
    }

    friend TwoModeFockState operator*(Complex scale, TwoModeFockState state) {
        for (auto& [occ, amp] : state.amplitudes_) amp *= scale;
        return state;
    }

private:
    AmplitudeMap amplitudes_;
};

/// One branch of the generalized nonmaximally entangled state
///   e^{i m phi} cos(g) |N-m, m> + e^{i(N-m) phi} e^{i theta} sin(g) |m, N-m>.
struct NmesSpec {
    unsigned photons = 0;            // N
    unsigned split = 0;              // m
    double entanglement_angle = 0;   // g, 0 = product state, pi/4 = maximal
    double relative_phase = 0;       // theta

    void validate() const {
        require_photon_cutoff(photons, "photon number");
        if (split > photons) {
            throw std::invalid_argument("NmesSpec: split m = " + std::to_string(split) +
                                        " exceeds photon number N = " + std::to_string(photons));
        }
        if (2 * split == photons) {
            throw std::invalid_argument("NmesSpec: degenerate branch 2m = N (both kets coincide)");
        }
        if (!(entanglement_angle >= 0.0 && entanglement_angle <= std::numbers::pi / 2)) {
            throw std::invalid_argument("NmesSpec: entanglement angle must lie in [0, pi/2]");
        }
    }
};

/// The raw two-term vector of an NMES branch with no validation: for 2m = N
/// both terms land on |m, m> and the result is unnormalized. Used for
/// off-diagonal dosing elements, which are bilinear and stay well defined.
inline TwoModeFockState nmes_ket(unsigned photons, unsigned split, double gamma, double theta, double phi) {
    if (split > photons) throw std::invalid_argument("nmes_ket: split exceeds photon number");
    const unsigned n = photons;
    const unsigned m = split;
    const Complex i{0.0, 1.0};
    TwoModeFockState state;
    state.add({n - m, m}, std::exp(i * (m * phi)) * std::cos(gamma));
    state.add({m, n - m}, std::exp(i * ((n - m) * phi + theta)) * std::sin(gamma));
    return state;
}

/// Builds the two-branch state of `spec` at relative phase `phi`. The
/// e^{i m phi} prefactor is kept, so off-diagonal dosing elements carry the
/// same phases as the closed form.
inline TwoModeFockState make_nmes_state(const NmesSpec& spec, double phi) {
    spec.validate();
    return nmes_ket(spec.photons, spec.split, spec.entanglement_angle, spec.relative_phase, phi);
}

/// e^q |psi> with e = (a + b)/sqrt(2), expanded binomially with exact ladder
/// factors. The result is generally unnormalized; annihilating below vacuum
/// drops the term.
inline TwoModeFockState apply_e_power(unsigned q, const TwoModeFockState& state,
                                      double prune_threshold = kDefaultPruneThreshold) {
    require_photon_cutoff(q, "operator power");
    const double prefactor = std::pow(2.0, -0.5 * q);
    TwoModeFockState out;
    for (const auto& [occ, amp] : state.amplitudes()) {
        require_photon_cutoff(occ.a, "mode-a occupation");
        require_photon_cutoff(occ.b, "mode-b occupation");
        // (a + b)^q = sum_j C(q, j) a^j b^{q-j}
        for (unsigned j = 0; j <= q; ++j) {
            const unsigned from_b = q - j;
            if (j > occ.a || from_b > occ.b) continue;
            const double ladder = std::sqrt(static_cast<double>(falling_factorial(occ.a, j)) *
                                            static_cast<double>(falling_factorial(occ.b, from_b)));
            const double coeff = prefactor * static_cast<double>(binomial(q, j)) * ladder;
            out.add({occ.a - j, occ.b - from_b}, amp * coeff);
        }
    }
    return out.pruned(prune_threshold);
}

/// <psi| (e^dag)^q e^q |psi> / q!, the q-photon absorption rate.
inline double dosing_expectation(unsigned q, const TwoModeFockState& state) {
    return apply_e_power(q, state).squared_norm() / static_cast<double>(factorial(q));
}

/// <bra| (e^dag)^q e^q |ket> / q!.
inline Complex dosing_matrix_element(unsigned q, const TwoModeFockState& bra,
                                     const TwoModeFockState& ket) {
    return apply_e_power(q, bra).inner(apply_e_power(q, ket)) / static_cast<double>(factorial(q));
}

}  // namespace litho
