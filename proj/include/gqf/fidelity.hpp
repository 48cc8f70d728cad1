// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_FIDELITY_HPP
#define GQF_FIDELITY_HPP

#include <vector>

#include "gqf/symplectic.hpp"

namespace gqf {

struct FidelityResult {
    double fidelity;                    ///< in [0, 1]
    std::vector<double> gk_spectrum;    ///< symplectic spectrum of G_K
    double overlap;                     ///< Tr[rho0 rho1]
    double regularization_epsilon;      ///< clamp actually applied (0 if none)
};

/// Gibbs matrix of K = rho1^{1/2} rho0 rho1^{1/2}:
/// G_K = i Omega log[ e^{i Omega G1/2} e^{i Omega G0} e^{i Omega G1/2} ].
Mat gk_matrix(const Mat& G0, const Mat& G1);

/// Symplectic spectrum of G_K straight from the eigenvalues of the phase
/// matrix product, avoiding the matrix logarithm.  Stable even for strongly
/// regularized (near-pure) inputs.
std::vector<double> gk_spectrum(const Mat& G0, const Mat& G1);

/// Uhlmann fidelity between Gaussian states:
/// F = Tr[rho0 rho1] * prod_j coth(g_{K,j}/4) with
/// Tr[rho0 rho1] = exp(-d^T (V0+V1)^{-1} d / 2) / sqrt(det(V0+V1)).
/// Singular symplectic eigenvalues are clamped to 1/2 + epsilon.
FidelityResult fidelity_gaussian(const GaussianState& s0, const GaussianState& s1,
                                 double epsilon = kDefaultEpsilon);

/// Gaussian overlap Tr[rho0 rho1].
double state_overlap(const GaussianState& s0, const GaussianState& s1);

/// Bhattacharyya coefficient (sum_x sqrt(p0 p1))^2 of two discrete
/// distributions on a common support.  Both must be normalized within 1e-6.
double bhattacharyya(const std::vector<double>& p0, const std::vector<double>& p1);

/// Bhattacharyya coefficient (int sqrt(p0 p1) dx)^2 of two densities sampled
/// on the same grid, via trapezoidal quadrature.
double bhattacharyya_sampled(const std::vector<double>& x, const std::vector<double>& p0,
                             const std::vector<double>& p1);

}  // namespace gqf

#endif
