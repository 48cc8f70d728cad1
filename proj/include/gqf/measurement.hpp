// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_MEASUREMENT_HPP
#define GQF_MEASUREMENT_HPP

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gqf/fidelity.hpp"
#include "gqf/symplectic.hpp"

namespace gqf {

/// Parameters of the optimal-measurement operator
/// M ~ D(u1) exp[-Q^T GM Q / 2 - vM^T Q] D(u1)^dag
///   = D(u1) D(uM) exp[-Q^T GM Q / 2] D(uM)^dag D(u1)^dag  (when uM exists),
/// with vM = GM uM.  uM is absent iff GM == 0 (equal Gibbs matrices), where
/// M reduces to the quadrature exponential exp[vM^T (Q - u1)].
struct MOperatorForm {
    Vec u1;
    Mat GM;
    Vec vM;
    std::optional<Vec> uM;
    double residual;  ///< ||e^{iOmGM} e^{iOmG1} e^{iOmGM} - e^{iOmG0}|| / ||e^{iOmG0}||
};

/// pre_unitary U (as a Gaussian unitary) such that the optimal measurement is
/// the spectral measurement of U O U^dag where O is the named canonical
/// observable (the number operator, or x p + p x).
struct NumberResolving {
    GaussianUnitary pre_unitary;
};
struct XpPlusPxEigenbasis {
    GaussianUnitary pre_unitary;
};
/// Quadrature measurement of cos(angle) x + sin(angle) p, outcomes offset by
/// the projection of pre_displacement (the projectors themselves are
/// displacement-independent along the measured axis).
struct Homodyne {
    double angle;  ///< radians in [0, pi)
    Vec pre_displacement;
};
struct PureStateProjector {
    GaussianState target;
};

using MeasurementType =
    std::variant<NumberResolving, XpPlusPxEigenbasis, Homodyne, PureStateProjector>;

std::string measurement_type_name(const MeasurementType& t);

struct ClassifyResult {
    MeasurementType type;
    double d1;  ///< larger eigenvalue of the canonical G_M
    double d2;  ///< smaller eigenvalue
    double boundary_distance;  ///< |d1 d2| / max(d1^2, d2^2); 0 on the type-(iii) locus
    bool boundary_flag;        ///< inside the tolerance band around the locus
};

/// Frame V_hat with rho1 sent to a zero-mean thermal state and rho0 to an
/// axis-aligned squeezed thermal state; applying V_hat^{-1} to the originals
/// reproduces the canonical pair.
struct CanonicalPair {
    GaussianUnitary V_hat;
    GaussianState rho0_canonical;
    GaussianState rho1_canonical;
    double nbar0;
    double nbar1;
    double r0;  ///< canonical squeezing, G0 = g0 diag(e^{2 r0}, e^{-2 r0})
};

/// Solve e^{i Om GM} e^{i Om G1} e^{i Om GM} = e^{i Om G0} for the real
/// symmetric GM via
/// e^{i Om GM} = e^{-i Om G1/2} sqrt(e^{i Om G1/2} e^{i Om G0} e^{i Om G1/2}) e^{-i Om G1/2}.
Mat solve_gm(const Mat& G0, const Mat& G1);

/// Relative Frobenius residual of the defining equation for a candidate GM.
double gm_residual(const Mat& GM, const Mat& G0, const Mat& G1);

/// Full optimal-measurement operator parameters for two Gaussian states.
MOperatorForm m_operator(const GaussianState& s0, const GaussianState& s1,
                         double epsilon = kDefaultEpsilon);

/// Reduce a single-mode pair to canonical form (rho1 thermal, rho0
/// axis-aligned with cov_11 >= cov_22).
CanonicalPair canonicalize_pair(const GaussianState& s0, const GaussianState& s1);

/// Classify the optimal measurement for a single-mode pair by the signs of
/// the eigenvalues d1, d2 of the canonical G_M.  Pure inputs yield
/// PureStateProjector.  |d1 d2| within tol of zero (relative to
/// max(d1^2,d2^2)) yields Homodyne with the boundary flag set.
ClassifyResult classify(const GaussianState& s0, const GaussianState& s1, double tol = 1e-8);

/// Residuals (L0-R0, L1-R1, L2-R2) of the Pauli-expanded single-mode matrix
/// equation at the candidate eigenvalue pair.  Convention: d1 multiplies the
/// p^2 term and d2 the x^2 term of the canonical G_M (the labeling under
/// which the published equation set closes).  Analytic continuation through
/// d1 d2 < 0 is taken via complex square roots.
std::array<double, 3> appendix_b_residuals(double d1, double d2, double r0, double nbar0,
                                           double nbar1);

enum class SweepType { Number, XpPx, HomodyneX, HomodyneP, Intersection };
const char* sweep_type_name(SweepType t);

struct SweepPoint {
    double r0;
    double nbar0;
    SweepType type;
    double d1;
    double d2;
    double boundary_distance;
};

struct GridSpec {
    double lo;
    double hi;
    int count;
    double at(int i) const { return count < 2 ? lo : lo + (hi - lo) * i / (count - 1); }
};

/// Classification over a (r0, nbar0) grid against a thermal reference with
/// nbar1 thermal quanta; reproduces the phase diagram of the canonical pair.
std::vector<SweepPoint> sweep_classification(double nbar1, const GridSpec& r0_grid,
                                             const GridSpec& nbar0_grid, double tol = 1e-8);

/// Classify a canonical-form point directly (thermal nbar1 vs squeezed
/// thermal (nbar0, r0)); the building block of sweep_classification.
SweepPoint classify_canonical_point(double nbar0, double nbar1, double r0, double tol = 1e-8);

/// Thermal-quanta ratio of the homodyne boundary: the type-(iii) locus is
/// e^{+-2 r0} = nbar0 (nbar0+1) (2 nbar1+1) / [nbar1 (nbar1+1) (2 nbar0+1)].
double homodyne_boundary_ratio(double nbar0, double nbar1);

}  // namespace gqf

#endif
