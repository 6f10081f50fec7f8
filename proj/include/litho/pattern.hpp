#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/combinatorics.hpp"
#include "litho/deposition.hpp"

namespace litho {

/// One term of the superposition: photon number n, weight |C_n|^2 and
/// subsidiary phase theta_n.
struct Branch {
    unsigned photons = 0;
    double weight = 0.0;
    double phase = 0.0;

    bool operator==(const Branch&) const = default;
};

/// Incoherent mixture of NMES branches sharing a mode split and an
/// entanglement angle, exposed for a time `exposure_time`.
struct SuperpositionRecipe {
    unsigned split = 0;
    double entanglement_angle = std::numbers::pi / 4;
    double exposure_time = 1.0;
    std::vector<Branch> branches;

    void validate() const {
        if (!(entanglement_angle >= 0.0 && entanglement_angle <= std::numbers::pi / 2)) {
            throw std::invalid_argument("recipe: entanglement angle must lie in [0, pi/2]");
        }
        if (!(exposure_time >= 0.0) || !std::isfinite(exposure_time)) {
            throw std::invalid_argument("recipe: exposure time must be finite and >= 0");
        }
        std::set<unsigned> seen;
        for (const auto& b : branches) {
            require_photon_cutoff(b.photons, "branch photon number");
            if (!seen.insert(b.photons).second) {
                throw std::invalid_argument("recipe: branch photon numbers must be distinct (n = " +
                                            std::to_string(b.photons) + " repeated)");
            }
            if (!(b.weight >= 0.0) || !std::isfinite(b.weight)) {
                throw std::invalid_argument("recipe: branch weights must be finite and >= 0");
            }
            if (split > b.photons) {
                throw std::invalid_argument("recipe: split m = " + std::to_string(split) +
                                            " exceeds branch photon number n = " +
                                            std::to_string(b.photons));
            }
            if (2 * split == b.photons && b.weight != 0.0) {
                throw std::invalid_argument("recipe: degenerate branch 2m = n carries nonzero weight");
            }
        }
    }

    double total_weight() const {
        double sum = 0.0;
        for (const auto& b : branches) sum += b.weight;
        return sum;
    }

    /// Weights rescaled to sum to one with the scale folded into the exposure
    /// time; every product weight * t is preserved.
    SuperpositionRecipe normalized() const {
        SuperpositionRecipe out = *this;
        const double total = total_weight();
        if (total > 0.0) {
            for (auto& b : out.branches) b.weight /= total;
            out.exposure_time *= total;
        }
        return out;
    }
};

namespace detail {

// C(n, m) / 2^n, the per-branch prefactor of the n-photon rate.
inline double branch_prefactor(unsigned photons, unsigned split) {
    return static_cast<double>(binomial(photons, split)) * inv_pow2(photons);
}

}  // namespace detail

/// Exposure P(phi) = t * sum_n w_n Delta_{n,m}(g, phi). Each branch is dosed at
/// its own photon order and branches add without cross terms.
inline double exposure_at(const SuperpositionRecipe& recipe, double phi) {
    const double visibility = std::sin(2.0 * recipe.entanglement_angle);
    double rate = 0.0;
    for (const auto& b : recipe.branches) {
        if (b.weight == 0.0) continue;
        const double frequency = static_cast<double>(b.photons) - 2.0 * recipe.split;
        rate += b.weight * detail::branch_prefactor(b.photons, recipe.split) *
                (1.0 + visibility * std::cos(frequency * phi + b.phase));
    }
    return recipe.exposure_time * rate;
}

inline DepositionCurve exposure_curve(const SuperpositionRecipe& recipe, std::vector<double> phi_grid) {
    recipe.validate();
    return DepositionCurve::sample(std::move(phi_grid),
                                   [&recipe](double phi) { return exposure_at(recipe, phi); });
}

/// P(phi) = t * (Q + sum_h a_h cos(h phi) + b_h sin(h phi)). Index h of the
/// coefficient vectors is the harmonic; entry 0 is unused and stays zero.
struct FourierPatternSpec {
    double background = 0.0;  // Q
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
    double exposure_time = 1.0;

    unsigned truncation() const {
        return cos_coeffs.empty() ? 0u : static_cast<unsigned>(cos_coeffs.size() - 1);
    }

    double evaluate(double phi) const {
        double sum = background;
        for (std::size_t h = 1; h < cos_coeffs.size(); ++h) {
            const double x = static_cast<double>(h) * phi;
            sum += cos_coeffs[h] * std::cos(x) + sin_coeffs[h] * std::sin(x);
        }
        return exposure_time * sum;
    }
};

/// Analytic harmonic expansion of a recipe. A branch with frequency n - 2m < 0
/// lands on harmonic |n - 2m| with its phase negated; b_h takes the minus sign
/// of cos(x + theta) = cos theta cos x - sin theta sin x.
inline FourierPatternSpec fourier_form(const SuperpositionRecipe& recipe) {
    recipe.validate();
    const double visibility = std::sin(2.0 * recipe.entanglement_angle);
    unsigned top = 0;
    for (const auto& b : recipe.branches) {
        const int f = static_cast<int>(b.photons) - 2 * static_cast<int>(recipe.split);
        top = std::max(top, static_cast<unsigned>(std::abs(f)));
    }
    FourierPatternSpec spec;
    spec.exposure_time = recipe.exposure_time;
    spec.cos_coeffs.assign(top + 1, 0.0);
    spec.sin_coeffs.assign(top + 1, 0.0);
    for (const auto& b : recipe.branches) {
        if (b.weight == 0.0) continue;
        const double scale = b.weight * detail::branch_prefactor(b.photons, recipe.split);
        spec.background += scale;
        const int f = static_cast<int>(b.photons) - 2 * static_cast<int>(recipe.split);
        const auto h = static_cast<std::size_t>(std::abs(f));
        const double phase = f >= 0 ? b.phase : -b.phase;
        spec.cos_coeffs[h] += scale * visibility * std::cos(phase);
        spec.sin_coeffs[h] -= scale * visibility * std::sin(phase);
    }
    return spec;
}

// Target patterns ------------------------------------------------------------

struct TargetHarmonic {
    unsigned harmonic = 0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// f(phi) = mean + sum_h cos_coeff cos(h phi) + sin_coeff sin(h phi).
struct TargetPattern {
    double mean = 0.0;
    std::vector<TargetHarmonic> harmonics;

    double evaluate(double phi) const {
        double sum = mean;
        for (const auto& h : harmonics) {
            sum += h.cos_coeff * std::cos(h.harmonic * phi) + h.sin_coeff * std::sin(h.harmonic * phi);
        }
        return sum;
    }
};

/// Fourier data of |sin phi| truncated after `n_terms` even harmonics:
/// 2/pi - (4/pi) sum_{n=1}^{n_terms} cos(2 n phi) / (4 n^2 - 1).
inline TargetPattern sinphi_target_coeffs(unsigned n_terms) {
    if (n_terms == 0) throw std::invalid_argument("sinphi target needs n_terms >= 1");
    TargetPattern target;
    target.mean = 2.0 / std::numbers::pi;
    for (unsigned n = 1; n <= n_terms; ++n) {
        const double denom = 4.0 * n * n - 1.0;
        target.harmonics.push_back({2 * n, -4.0 / (std::numbers::pi * denom), 0.0});
    }
    return target;
}

/// Oscillatory part of a Fourier form in exposure units (t folded in).
inline TargetPattern oscillatory_target(const FourierPatternSpec& spec) {
    TargetPattern target;
    target.mean = spec.exposure_time * spec.background;
    for (unsigned h = 1; h <= spec.truncation(); ++h) {
        const double c = spec.exposure_time * spec.cos_coeffs[h];
        const double s = spec.exposure_time * spec.sin_coeffs[h];
        if (c != 0.0 || s != 0.0) target.harmonics.push_back({h, c, s});
    }
    return target;
}

/// Pseudo-Fourier synthesis with m = 0: harmonic h is realized by the h-photon
/// branch, whose oscillatory exposure is t w_h sin(2g) / 2^h cos(h phi + theta_h).
/// The oscillatory part is matched exactly; the background is whatever the
/// branches imply and exceeds the target mean when g < pi/4. The result is
/// normalized (weights sum to one, scale folded into t).
inline SuperpositionRecipe fit_target(const TargetPattern& target, double gamma, double exposure_time) {
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2)) {
        throw std::invalid_argument("fit: entanglement angle must lie in [0, pi/2]");
    }
    const double visibility = std::sin(2.0 * gamma);
    if (!(std::abs(visibility) > 1e-12)) {
        throw std::invalid_argument("fit: sin(2 gamma) = 0, no oscillatory exposure is realizable");
    }
    if (!(exposure_time > 0.0) || !std::isfinite(exposure_time)) {
        throw std::invalid_argument("fit: exposure time must be finite and > 0");
    }
    SuperpositionRecipe recipe;
    recipe.split = 0;
    recipe.entanglement_angle = gamma;
    recipe.exposure_time = exposure_time;
    std::set<unsigned> seen;
    for (const auto& h : target.harmonics) {
        if (h.harmonic == 0) {
            throw std::invalid_argument("fit: harmonic 0 is the background and cannot be a branch");
        }
        require_photon_cutoff(h.harmonic, "target harmonic");
        if (!seen.insert(h.harmonic).second) {
            throw std::invalid_argument("fit: harmonic " + std::to_string(h.harmonic) + " listed twice");
        }
        const double amplitude = std::hypot(h.cos_coeff, h.sin_coeff);
        if (amplitude == 0.0) continue;
        // negative cosine coefficients come out as theta = pi, never -pi
        const double y = h.sin_coeff == 0.0 ? 0.0 : -h.sin_coeff;
        const double weight =
            amplitude / (exposure_time * visibility * detail::branch_prefactor(h.harmonic, 0));
        if (!(weight >= 0.0)) throw std::logic_error("fit: negative implied weight");
        recipe.branches.push_back({h.harmonic, weight, std::atan2(y, h.cos_coeff)});
    }
    std::sort(recipe.branches.begin(), recipe.branches.end(),
              [](const Branch& l, const Branch& r) { return l.photons < r.photons; });
    return recipe.normalized();
}

/// |sin phi| synthesized from harmonics up to `max_harmonic` (even, >= 2).
inline SuperpositionRecipe sinphi_recipe(unsigned max_harmonic, double gamma, double exposure_time) {
    if (max_harmonic < 2 || max_harmonic % 2 != 0) {
        throw std::invalid_argument("sinphi recipe needs an even maximum harmonic >= 2");
    }
    return fit_target(sinphi_target_coeffs(max_harmonic / 2), gamma, exposure_time);
}

// Diagnostics ----------------------------------------------------------------

struct PatternError {
    double rms = 0.0;
    double sup = 0.0;
};

/// Zero-mean, unit-peak rescaling (peak = largest |x - mean|). A constant
/// signal maps to all zeros.
inline std::vector<double> normalize_shape(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    if (out.empty()) return out;
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    double peak = 0.0;
    for (auto& v : out) {
        v -= mean;
        peak = std::max(peak, std::abs(v));
    }
    if (peak > 0.0) {
        for (auto& v : out) v /= peak;
    }
    return out;
}

inline PatternError pattern_error(std::span<const double> values, std::span<const double> target,
                                  bool normalize) {
    if (values.size() != target.size()) {
        throw std::invalid_argument("pattern_error: curve and target lengths differ");
    }
    if (values.empty()) return {};
    std::vector<double> x(values.begin(), values.end());
    std::vector<double> y(target.begin(), target.end());
    if (normalize) {
        x = normalize_shape(x);
        y = normalize_shape(y);
    }
    double sq = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::abs(x[i] - y[i]);
        sq += d * d;
        sup = std::max(sup, d);
    }
    return {std::sqrt(sq / static_cast<double>(x.size())), sup};
}

inline PatternError pattern_error(const DepositionCurve& curve, std::span<const double> target,
                                  bool normalize) {
    return pattern_error(curve.values(), target, normalize);
}

namespace detail {

// Vertex of the parabola through samples i-1, i, i+1; the sample itself at
// the ends of the grid.
inline double refine_extremum(std::span<const double> x, std::span<const double> y, std::size_t i) {
    if (i == 0 || i + 1 >= y.size()) return x[i];
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    if (denom == 0.0) return x[i];
    const double offset = std::clamp(0.5 * (y[i - 1] - y[i + 1]) / denom, -1.0, 1.0);
    const double step = offset >= 0.0 ? x[i + 1] - x[i] : x[i] - x[i - 1];
    return x[i] + offset * step;
}

}  // namespace detail

/// Distance in phi between the global maximum and the nearest adjacent local
/// minimum (the Rayleigh feature size in phase units). Interior maxima are
/// preferred among equal peaks; only interior samples count as minima.
inline double fringe_halfperiod(const DepositionCurve& curve) {
    const auto x = curve.phi();
    const auto y = curve.values();
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("fringe_halfperiod: curve needs at least 3 samples");

    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    const double range = *hi_it - *lo_it;
    if (!(range > 1e-12 * std::max(1.0, std::abs(*hi_it)))) {
        throw std::invalid_argument("fringe_halfperiod: no interior extremum (flat curve)");
    }
    const double tie = 1e-9 * range;

    std::optional<std::size_t> peak;
    for (std::size_t i = 1; i + 1 < n && !peak; ++i) {
        if (y[i] >= *hi_it - tie) peak = i;
    }
    if (!peak) peak = static_cast<std::size_t>(hi_it - y.begin());

    auto is_local_min = [&](std::size_t i) {
        return y[i] <= y[i - 1] && y[i] <= y[i + 1] && (y[i] < y[i - 1] || y[i] < y[i + 1]);
    };
    std::optional<std::size_t> right;
    for (std::size_t i = *peak + 1; i + 1 < n; ++i) {
        if (is_local_min(i)) {
            right = i;
            break;
        }
    }
    std::optional<std::size_t> left;
    for (std::size_t i = *peak; i-- > 1;) {
        if (is_local_min(i)) {
            left = i;
            break;
        }
    }
    if (!left && !right) {
        throw std::invalid_argument("fringe_halfperiod: no interior minimum next to the maximum");
    }
    const double peak_phi = detail::refine_extremum(x, y, *peak);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& idx : {left, right}) {
        if (idx) best = std::min(best, std::abs(detail::refine_extremum(x, y, *idx) - peak_phi));
    }
    return best;
}

// Figure reproduction ----------------------------------------------------------

struct SinphiFit {
    unsigned max_harmonic = 0;
    SuperpositionRecipe recipe;
    DepositionCurve curve;
    PatternError error;
};

/// |sin phi| fits at max harmonics 2, 6 and 12, each compared against the
/// exact |sin phi| on the same grid after shape normalization.
inline std::vector<SinphiFit> figure_one(const std::vector<double>& phi_grid,
                                         double gamma = std::numbers::pi / 4,
                                         double exposure_time = 1.0) {
    std::vector<double> reference(phi_grid.size());
    std::transform(phi_grid.begin(), phi_grid.end(), reference.begin(),
                   [](double p) { return std::abs(std::sin(p)); });
    std::vector<SinphiFit> fits;
    for (unsigned top : {2u, 6u, 12u}) {
        auto recipe = sinphi_recipe(top, gamma, exposure_time);
        auto curve = exposure_curve(recipe, phi_grid);
        const auto err = pattern_error(curve, reference, true);
        fits.push_back({top, std::move(recipe), std::move(curve), err});
    }
    return fits;
}

}  // namespace litho
