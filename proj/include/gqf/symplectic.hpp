// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_SYMPLECTIC_HPP
#define GQF_SYMPLECTIC_HPP

#include <complex>
#include <vector>

#include "gqf/matfunc.hpp"

namespace gqf {

// Conventions used throughout:
//   * quadrature ordering (x1, p1, ..., xn, pn)
//   * hbar = 1, [x, p] = i, vacuum variance 1/2
//   * a squeezing parameter r > 0 (theta_s = 0) reduces the x variance:
//     V = (2 nbar + 1)/2 * R(theta_s/2) diag(e^{-2r}, e^{2r}) R(theta_s/2)^T,
//     equivalently the Gibbs matrix is
//     G = 2 acoth(2 nbar + 1) * R diag(e^{2r}, e^{-2r}) R^T.

/// Default clamp applied to singular symplectic eigenvalues when callers
/// ask for automatic handling of pure states.
inline constexpr double kDefaultEpsilon = 1e-7;

/// The symplectic form on n modes: Omega = direct sum of [[0,1],[-1,0]].
struct SymplecticForm {
    int n_modes;
    Mat Omega;
    static SymplecticForm of(int n_modes);
};

/// Omega for n modes (shorthand for SymplecticForm::of(n).Omega).
Mat omega_matrix(int n_modes);

/// First and second moments of an n-mode Gaussian state.  The covariance
/// is symmetrized on construction; physicality (all symplectic eigenvalues
/// >= 1/2 - 1e-8) is enforced.
struct GaussianState {
    int n_modes;
    Vec mean;
    Mat cov;

    GaussianState(Vec mean_in, Mat cov_in);
};

/// Gibbs parametrization exp[-(Q-u)^T G (Q-u)/2] of a Gaussian operator.
struct GibbsForm {
    int n_modes;
    Mat G;
    Vec u;
    double epsilon_used = 0.0;  ///< regularization actually applied, 0 if none
};

/// Gaussian unitary acting on states as mean -> S mean + d, cov -> S cov S^T.
struct GaussianUnitary {
    Mat S;
    Vec d;

    GaussianState apply(const GaussianState& s) const;
    GaussianUnitary inverse() const;
    /// Composition this∘other: apply `other` first, then this.
    GaussianUnitary compose(const GaussianUnitary& other) const;
    static GaussianUnitary identity(int n_modes);
};

/// V = S diag(nu_1, nu_1, ..., nu_n, nu_n) S^T with S symplectic and the
/// symplectic eigenvalues nu sorted descending.
struct WilliamsonDecomposition {
    Mat S;
    std::vector<double> nu;
};

WilliamsonDecomposition williamson(const Mat& V);

/// Symplectic eigenvalues of a covariance matrix, sorted descending.
std::vector<double> symplectic_eigenvalues(const Mat& V);

/// Gibbs matrix of a covariance matrix: G = 2 i Omega acoth(2 V i Omega),
/// evaluated through the Williamson decomposition as
/// G = S^{-T} [ (+)_j 2 acoth(2 nu_j) 1_2 ] S^{-1]}.  Symplectic eigenvalues
/// below 1/2 + epsilon are clamped to 1/2 + epsilon first; epsilon = 0 with a
/// singular eigenvalue raises SingularWithoutRegularization.
GibbsForm gibbs_from_covariance(const Mat& V, double epsilon);
GibbsForm gibbs_from_state(const GaussianState& s, double epsilon);

/// Inverse of gibbs_from_covariance: V with -2 V i Omega = (E+1)(E-1)^{-1}
/// for E = exp(i Omega G).  Raises DegenerateGibbs when i Omega G has an
/// eigenvalue at zero.
Mat covariance_from_gibbs(const GibbsForm& g);

/// Single-mode state D(alpha) S(r e^{i theta_s}) rho_T(nbar) S^dag D^dag
/// in the convention noted at the top of this header;
/// mean = sqrt(2) (Re alpha, Im alpha).
GaussianState state_builder(double nbar, double r, double theta_s, Complex alpha);

/// exp(i Omega G) for a Gibbs (or Gibbs-like) matrix G.
CMat gibbs_phase_matrix(const Mat& G);

/// Symplectic spectrum of a Gibbs-type matrix G: the positive values g with
/// eigenvalues of i Omega G equal to +-g, sorted descending.
std::vector<double> gibbs_symplectic_spectrum(const Mat& G);

}  // namespace gqf

#endif
