#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "litho/deposition.hpp"
#include "litho/fock.hpp"
#include "litho/pattern.hpp"

namespace {

using litho::NmesSpec;
using std::numbers::pi;

TEST(DepositionMes, Examples) {
    EXPECT_DOUBLE_EQ(litho::deposition_mes(1, 0.0), 1.0);
    EXPECT_NEAR(litho::deposition_mes(2, pi / 2), 0.0, 1e-16);
    for (double phi = 0.0; phi < 2 * pi; phi += 0.05) {
        EXPECT_NEAR(litho::deposition_mes(4, phi), litho::deposition_mes(4, phi + 2 * pi / 4), 1e-14);
    }
    EXPECT_THROW(litho::deposition_mes(0, 0.0), std::invalid_argument);
}

TEST(DepositionNmes, Examples) {
    for (unsigned n = 1; n <= 12; ++n) {
        for (double phi = 0.0; phi < 2 * pi; phi += 0.1) {
            EXPECT_NEAR(litho::deposition_nmes(n, pi / 4, phi), litho::deposition_mes(n, phi), 1e-15);
        }
    }
    EXPECT_DOUBLE_EQ(litho::deposition_nmes(2, 0.0, 1.3), 0.25);
    EXPECT_NEAR(litho::deposition_nmes(2, pi / 8, 0.0), 0.25 * (1 + std::sqrt(2.0) / 2), 1e-15);
    EXPECT_NEAR(litho::deposition_nmes(2, pi / 8, 0.0), 0.42678, 1e-5);
    EXPECT_THROW(litho::deposition_nmes(0, 0.1, 0.0), std::invalid_argument);
}

TEST(DepositionGeneral, ReducesToNmesAtZeroSplit) {
    for (double g : {0.0, 0.2, pi / 4, 1.1}) {
        for (double phi = 0.0; phi < 2 * pi; phi += 0.3) {
            EXPECT_NEAR(litho::deposition_general({5, 0, g, 0.0}, phi), litho::deposition_nmes(5, g, phi), 1e-15);
        }
    }
    EXPECT_THROW(litho::deposition_general({2, 1, pi / 4, 0}, 0.0), std::invalid_argument);
    EXPECT_THROW(litho::deposition_general({0, 0, pi / 4, 0}, 0.0), std::invalid_argument);
}

TEST(DepositionGeneral, MatchesOracleOnSweep) {
    const NmesSpec spec{4, 1, pi / 4, pi / 3};
    for (auto phi : litho::uniform_grid(0, 2 * pi, 64)) {
        const double oracle = litho::dosing_expectation(4, litho::make_nmes_state(spec, phi));
        EXPECT_NEAR(litho::deposition_general(spec, phi), oracle, 1e-10);
    }
}

TEST(DepositionGeneral, RangeAndPeriodicity) {
    for (unsigned n = 1; n <= 12; ++n) {
        for (unsigned m = 0; m <= n; ++m) {
            if (2 * m == n) continue;
            for (double g : {0.0, pi / 8, pi / 4, 3 * pi / 8}) {
                const NmesSpec spec{n, m, g, 0.7};
                const double c = static_cast<double>(litho::binomial(n, m)) / std::ldexp(1.0, n);
                const double period = 2 * pi / std::abs(static_cast<double>(n) - 2.0 * m);
                for (double phi = 0.0; phi < 2 * pi; phi += 0.37) {
                    const double d = litho::deposition_general(spec, phi);
                    EXPECT_GE(d, c * (1 - std::sin(2 * g)) - 1e-15);
                    EXPECT_LE(d, c * (1 + std::sin(2 * g)) + 1e-15);
                    EXPECT_NEAR(litho::deposition_general(spec, phi + period), d, 1e-12);
                }
            }
        }
    }
}

TEST(MatrixElementGeneral, DiagonalAndProductStateLimits) {
    for (double phi : {0.0, 0.4, 2.5}) {
        const auto z = litho::matrix_element_general(6, 1, 1, 0.5, 0.3, 0.3, phi);
        EXPECT_NEAR(z.real(), litho::deposition_general({6, 1, 0.5, 0.3}, phi), 1e-15);
        EXPECT_NEAR(z.imag(), 0.0, 1e-15);

        const auto w = litho::matrix_element_general(6, 1, 4, 0.0, 0.3, 1.9, phi);
        const auto expected = std::sqrt(6.0 * 15.0) / 64.0 * std::exp(std::complex<double>(0, 3 * phi));
        EXPECT_LE(std::abs(w - expected), 1e-15);
    }
    EXPECT_THROW(litho::matrix_element_general(3, 4, 0, 0.1, 0, 0, 0), std::out_of_range);
}

TEST(MatrixElementGeneral, CrossBranchMatchesOracle) {
    const double phi = 0.7;
    const auto closed = litho::matrix_element_general(2, 0, 1, pi / 3, 0.0, pi / 4, phi);
    const auto oracle = litho::dosing_matrix_element(2, litho::make_nmes_state({2, 0, pi / 3, 0.0}, phi),
                                                     litho::nmes_ket(2, 1, pi / 3, pi / 4, phi));
    EXPECT_LE(std::abs(closed - oracle), 1e-12);
    EXPECT_NEAR(closed.real(), 0.461951917076201, 1e-12);
    EXPECT_NEAR(closed.imag(), 0.1334683479452112, 1e-12);
}

TEST(DepositionResonant, Examples) {
    EXPECT_NEAR(litho::deposition_resonant(1, 1, pi / 4), 0.75, 1e-15);
    for (unsigned n = 1; n <= 8; ++n) {
        for (unsigned k = 1; k <= 4; ++k) {
            for (double phi = -3.0; phi < 3.0; phi += 0.11) {
                EXPECT_NEAR(litho::deposition_resonant(n, k, phi),
                            litho::deposition_resonant_substituted(n, k, phi), 1e-12);
            }
        }
    }
    EXPECT_THROW(litho::deposition_resonant(2, 0, 0.0), std::invalid_argument);
    EXPECT_THROW(litho::deposition_resonant(0, 1, 0.0), std::invalid_argument);
}

TEST(DepositionResonant, HigherOrderIsNonUniform) {
    // N=2, k=2: sin(6 phi) + sin(2 phi) beats, so successive maxima differ in height
    auto curve = litho::DepositionCurve::sample(litho::uniform_grid(0, 2 * pi, 4096),
                                                [](double p) { return litho::deposition_resonant(2, 2, p); });
    const auto y = curve.values();
    double hi = 0, lo_peak = 1;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            hi = std::max(hi, y[i]);
            lo_peak = std::min(lo_peak, y[i]);
        }
    }
    EXPECT_GT(hi - lo_peak, 0.05);
}

TEST(EffectiveResolution, Table) {
    using litho::effective_resolution;
    EXPECT_DOUBLE_EQ(effective_resolution({litho::Classical{}, 2.0}), 0.5);
    EXPECT_DOUBLE_EQ(effective_resolution({litho::MaximallyEntangled{4}, 1.0}), 1.0 / 16);
    EXPECT_DOUBLE_EQ(effective_resolution({litho::Resonant{2, 1}, 1.0}), 1.0 / 16);
    EXPECT_DOUBLE_EQ(effective_resolution({litho::Resonant{2, 1}, 1.0}),
                     0.5 * effective_resolution({litho::MaximallyEntangled{2}, 1.0}));
    for (unsigned n = 1; n <= 20; ++n) {
        // exact in real arithmetic; within a few ulps in floating point
        EXPECT_DOUBLE_EQ(effective_resolution({litho::Classical{}, 0.8}) /
                             effective_resolution({litho::MaximallyEntangled{n}, 0.8}),
                         static_cast<double>(n));
    }
    EXPECT_THROW(effective_resolution({litho::Classical{}, 0.0}), std::invalid_argument);
    EXPECT_THROW(effective_resolution({litho::Resonant{2, 0}, 1.0}), std::invalid_argument);
}

TEST(NonlocalEntanglement, AmplitudeGrowsWhileExtremaStayPut) {
    const auto grid = litho::uniform_grid(-pi / 8, 2 * pi - pi / 8, 2048);
    double previous = -1;
    double reference_halfperiod = 0;
    for (int step = 1; step <= 16; ++step) {
        const double g = step * (pi / 4) / 16;
        auto curve = litho::DepositionCurve::sample(grid, [g](double p) { return litho::deposition_nmes(3, g, p); });
        const auto [lo, hi] = std::minmax_element(curve.values().begin(), curve.values().end());
        const double amplitude = *hi - *lo;
        EXPECT_GT(amplitude, previous);
        previous = amplitude;
        const double half = litho::fringe_halfperiod(curve);
        if (step == 1) reference_halfperiod = half;
        EXPECT_NEAR(half, reference_halfperiod, 1e-9);
        // maxima of cos(3 phi) sit at 2 pi j / 3 independent of g
        const auto peak = std::distance(curve.values().begin(), hi);
        const double x = curve.phi()[peak];
        EXPECT_NEAR(std::remainder(x, 2 * pi / 3), 0.0, 2 * pi / 2048);
    }
}

TEST(DepositionCurve, RejectsBrokenInvariants) {
    EXPECT_THROW(litho::DepositionCurve({0.0, 1.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(litho::DepositionCurve({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(litho::DepositionCurve({0.0, 1.0}, {1.0, -0.1}), std::invalid_argument);
    EXPECT_THROW(litho::uniform_grid(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(litho::uniform_grid(1, 0, 8), std::invalid_argument);
}

}  // namespace
