#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "litho/deposition.hpp"
#include "litho/fock.hpp"
#include "litho/parallel.hpp"

namespace litho {

/// Largest deviations between the closed forms and the Fock-space oracle over
/// a parameter lattice.
struct OracleReport {
    std::size_t deposition_checks = 0;
    std::size_t matrix_checks = 0;
    double max_deposition_error = 0.0;
    double max_matrix_error = 0.0;
};

struct OracleLattice {
    unsigned max_photons = 12;
    std::size_t phi_samples = 64;
    std::vector<double> gammas{0.0, std::numbers::pi / 8, std::numbers::pi / 6, std::numbers::pi / 4,
                               3 * std::numbers::pi / 8};
    std::vector<double> thetas{0.0, std::numbers::pi / 4, std::numbers::pi};
    /// Also sweep off-diagonal elements over every (m, m') pair.
    bool matrix_elements = true;
};

inline OracleReport verify_oracle_lattice(const OracleLattice& lattice = {}) {
    const auto phis = uniform_grid(0.0, 2 * std::numbers::pi, lattice.phi_samples);

    struct Task {
        unsigned photons;
        unsigned split;
    };
    std::vector<Task> tasks;
    for (unsigned n = 1; n <= lattice.max_photons; ++n) {
        for (unsigned m = 0; m <= n; ++m) tasks.push_back({n, m});
    }
    std::vector<OracleReport> partial(tasks.size());

    parallel_for(tasks.size(), [&](std::size_t idx) {
        const auto [n, m] = tasks[idx];
        OracleReport& report = partial[idx];
        for (double gamma : lattice.gammas) {
            for (double theta : lattice.thetas) {
                for (double phi : phis) {
                    if (2 * m != n) {
                        const NmesSpec spec{n, m, gamma, theta};
                        const double oracle = dosing_expectation(n, make_nmes_state(spec, phi));
                        const double closed = deposition_general(spec, phi);
                        report.max_deposition_error =
                            std::max(report.max_deposition_error, std::abs(oracle - closed));
                        ++report.deposition_checks;
                    }
                    if (!lattice.matrix_elements) continue;
                    const auto bra = apply_e_power(n, nmes_ket(n, m, gamma, theta, phi));
                    for (unsigned mp = 0; mp <= n; ++mp) {
                        for (double theta_p : lattice.thetas) {
                            const auto ket = apply_e_power(n, nmes_ket(n, mp, gamma, theta_p, phi));
                            const Complex oracle = bra.inner(ket) / static_cast<double>(factorial(n));
                            const Complex closed =
                                matrix_element_general(n, m, mp, gamma, theta, theta_p, phi);
                            report.max_matrix_error =
                                std::max(report.max_matrix_error, std::abs(oracle - closed));
                            ++report.matrix_checks;
                        }
                    }
                }
            }
        }
    });

    OracleReport total;
    for (const auto& p : partial) {
        total.deposition_checks += p.deposition_checks;
        total.matrix_checks += p.matrix_checks;
        total.max_deposition_error = std::max(total.max_deposition_error, p.max_deposition_error);
        total.max_matrix_error = std::max(total.max_matrix_error, p.max_matrix_error);
    }
    return total;
}

}  // namespace litho
