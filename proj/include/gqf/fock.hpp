// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_FOCK_HPP
#define GQF_FOCK_HPP

#include <utility>
#include <vector>

#include "gqf/measurement.hpp"

namespace gqf {

// Truncated Fock-space brute-force engine, the independent ground truth for
// the Gaussian-path results.  Single mode; x = (a + a^dag)/sqrt(2).

struct FockDensityMatrix {
    int cutoff;
    CMat rho;              ///< Hermitian, trace 1 after renormalization
    double trace_deficit;  ///< probability mass outside the cutoff before renormalization
};

struct OraclePovm {
    std::vector<CMat> elements;
};

/// Elementary operators on the truncated space.
CMat annihilation(int cutoff);
CMat position_op(int cutoff);
CMat momentum_op(int cutoff);
CMat number_op(int cutoff);
/// D(alpha), S(xi) and exp(-i theta n) built at a working dimension large
/// enough that the reported columns are exact to ~1e-12.
CMat displacement_op(Complex alpha, int cutoff);
CMat squeeze_op(Complex xi, int cutoff);
CMat rotation_op(double theta, int cutoff);

/// D(alpha) S(r e^{i theta_s}) rho_T(nbar) S^dag D^dag, built from exact
/// squeezed/displaced number-state columns at an enlarged working dimension
/// and projected to the cutoff.  trace_deficit is the true probability mass
/// lost to the projection; CutoffTooSmall is raised when it reaches 1e-6.
FockDensityMatrix build_state(double nbar, double r, double theta_s, Complex alpha, int cutoff);

/// Smallest cutoff (>= floor) at which build_state meets the target deficit.
int recommended_cutoff(double nbar, double r, Complex alpha, double target_deficit,
                       int floor_cutoff = 20);

/// Quadrature mean and covariance of a Fock density matrix.
std::pair<Vec, Mat> fock_moments(const FockDensityMatrix& s);

/// M = rho1^{-1/2} sqrt(rho1^{1/2} rho0 rho1^{1/2}) rho1^{-1/2} with the
/// inverse taken on the support of rho1 (eigenvalues below 1e-12 of the
/// maximum are dropped).  Rank deficiency beyond condition number 1e14
/// raises IllConditioned unless allow_rank_deficient is set.
CMat m_operator_fock(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                     bool allow_rank_deficient = false);

/// Uhlmann fidelity via Hermitian eigen-square-roots, clipped to [0, 1].
double fidelity_fock(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1);

/// Bhattacharyya coefficient of outcome distributions p_j(x) = Tr[rho_j E_x].
double bc_under_povm(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                     const OraclePovm& povm);

/// Worst-case residuals of the optimality conditions
///   E_x^{1/2} (rho1^{1/2} - mu_x rho0^{1/2} W^dag) = 0  and
///   Tr[W rho0^{1/2} E_x rho1^{1/2}] real,
/// with W the polar unitary of rho0^{1/2} rho1^{1/2} and mu_x the
/// least-squares scalar per element.  Residuals are reported over elements
/// carrying at least weight_floor of the summed outcome probability
/// p0(x) + p1(x) (elements below the floor are numerically unconstrained in
/// the truncated space).
std::pair<double, double> fuchs_caves_conditions(const FockDensityMatrix& rho0,
                                                 const FockDensityMatrix& rho1,
                                                 const OraclePovm& povm,
                                                 double weight_floor = 1e-2);

/// SLD from L_{nm} = 2 (drho)_{nm} / (p_n + p_m) in rho's eigenbasis and
/// the quantum Fisher information Tr[rho L^2].
std::pair<CMat, double> sld_fock(const CMat& rho, const CMat& drho);

/// Number-basis projectors |n><n|.
OraclePovm number_povm(int cutoff);

/// Binned homodyne POVM for the quadrature cos(angle) x + sin(angle) p:
/// `bins` bins over [-range, range] integrated with 5-point Gauss-Legendre
/// panels, plus a tail element completing the identity.
OraclePovm homodyne_povm(double angle, double range, int cutoff, int bins = 801);

/// Rank-1 projector POVM from orthonormal columns.
OraclePovm projector_povm(const CMat& columns);

/// Fock-space D(u1) D(uM) exp[-Q^T GM Q/2] D(uM)^dag D(u1)^dag (or the
/// quadrature exponential when GM = 0), for validating MOperatorForm.
CMat gaussian_m_operator_fock(const MOperatorForm& form, int cutoff);

/// Orthonormal eigenbasis of the optimal measurement described by a
/// MOperatorForm, as Fock-space columns: the displaced image of the number
/// basis (elliptic GM), of the x p + p x eigenbasis (hyperbolic GM), or a
/// binned-quadrature basis is not produced here (parabolic GM returns an
/// empty matrix; use homodyne_povm instead).
CMat optimal_basis_fock(const MOperatorForm& form, int cutoff);

/// Completeness defect max |sum_x E_x - 1|.
double povm_completeness_defect(const OraclePovm& povm);

}  // namespace gqf

#endif
