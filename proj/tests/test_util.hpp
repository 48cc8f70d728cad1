// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_TEST_UTIL_HPP
#define GQF_TEST_UTIL_HPP

#include <random>

#include "gqf/symplectic.hpp"

namespace gqf::testutil {

/// Random symplectic matrix exp(Omega A) with A symmetric, entries ~ scale.
inline Mat random_symplectic(int n_modes, std::mt19937_64& rng, double scale = 0.4) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat A(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i) {
        for (int j = i; j < 2 * n_modes; ++j) {
            A(i, j) = u(rng);
            A(j, i) = A(i, j);
        }
    }
    CMat gen = (omega_matrix(n_modes) * A).cast<Complex>();
    return matrix_exp(gen).real();
}

/// Random physical state with symplectic eigenvalues in [0.5 + nu_margin, nu_max].
inline GaussianState random_state(int n_modes, std::mt19937_64& rng, double nu_margin = 5e-2,
                                  double nu_max = 2.5, double mean_scale = 1.5) {
    std::uniform_real_distribution<double> unu(0.5 + nu_margin, nu_max);
    std::uniform_real_distribution<double> um(-mean_scale, mean_scale);
    Mat S = random_symplectic(n_modes, rng);
    Vec d(2 * n_modes);
    for (int j = 0; j < n_modes; ++j) {
        const double nu = unu(rng);
        d(2 * j) = nu;
        d(2 * j + 1) = nu;
    }
    Vec mean(2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i) mean(i) = um(rng);
    return GaussianState(mean, Mat(S * d.asDiagonal() * S.transpose()));
}

}  // namespace gqf::testutil

#endif
