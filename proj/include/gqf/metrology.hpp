// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_METROLOGY_HPP
#define GQF_METROLOGY_HPP

#include <functional>

#include "gqf/measurement.hpp"

namespace gqf {

// The single-mode estimation channels follow the frame of the closed-form
// results they reproduce: probe covariances are written as
// V = (2 nbar + 1)/2 * R(theta_s/2) diag(e^{+2r}, e^{-2r}) R(theta_s/2)^T
// (x variance grows with r).  Note this is the axis-swapped frame relative
// to state_builder; the two are related by r -> -r.

enum class ChannelKind { Displacement, Phase, Squeezing, Loss, Custom };

struct ChannelParams {
    double nbar = 0.0;
    double r = 0.0;
    double theta_s = 0.0;
    double alpha = 0.0;    ///< displacement magnitude |alpha|
    double theta_c = 0.0;  ///< displacement angle
    double gamma = 0.0;    ///< loss rate (Loss only)
    double time = 1.0;     ///< evolution time (Loss only)
};

struct ParametrizedChannel {
    ChannelKind kind = ChannelKind::Custom;
    std::function<GaussianState(double)> state_at;
    /// returns (du/dtheta, dV/dtheta)
    std::function<std::pair<Vec, Mat>(double)> derivative_at;
};

struct SldQfiResult {
    Mat GM_rate;      ///< G_M / dtheta
    Vec vM_rate;      ///< v_M / dtheta = V^{-1} (du/dtheta) / 2
    double nu;        ///< trace constant per dtheta: Tr[GM_rate V]
    double qfi;       ///< H = -Tr[dV GM_rate] + du^T V^{-1} du
    MeasurementType measurement_type;
};

/// Solve 4 V G V + Omega G Omega + 2 dV = 0 for G = G_M/dtheta on the
/// symmetric subspace.  V must be full rank (all nu > 1/2) unless dV = 0;
/// a singular probe with a nonzero source raises PureProbeUnsupported.
Mat gm_rate_lyapunov(const Mat& V, const Mat& dV);

/// Series solution i Omega sum_m W^{-m-1} W' W^{-m-1} (independent route,
/// used as a cross-check).  Truncated when the term norm drops below 1e-14
/// or after 10^4 terms; warns via NumericalBreakdown if the contraction
/// ratio is >= 1 - 1e-6 (near-pure probe).
Mat gm_rate_series(const Mat& V, const Mat& dV);

/// SLD parameters, QFI and the measurement classification of the SLD
/// eigenbasis for a channel at parameter value theta.  Pure probes are
/// clamped to nu = 1/2 + epsilon internally and the QFI Richardson-
/// extrapolated over epsilon in {1e-6, 1e-7, 1e-8}.
SldQfiResult sld_qfi(const ParametrizedChannel& ch, double theta);

/// Finite-difference QFI 4 [1 - F(rho_theta, rho_theta+dtheta)] / dtheta^2.
double qfi_from_fidelity(const ParametrizedChannel& ch, double theta, double dtheta);

/// The four analytic channels with exact derivative callables.
ParametrizedChannel channel_library(ChannelKind kind, const ChannelParams& p);

/// Closed-form SLD/QFI results (used as test oracles for sld_qfi):
///   Displacement: H = [V^{-1}]_11, G_M = 0.
///   Phase:        G_M/dtheta = (2n+1) sinh 2r / (2n^2+2n+1) * sigma_x at
///                 theta = 0 (H assembled from the same matrix).
///   Squeezing:    H(s) with the displacement term; diagonal G_M rate.
///   Loss:         squeezed-vacuum probe formulas in cos^2 phi = e^{-gamma t}.
SldQfiResult sld_closed_forms(ChannelKind kind, const ChannelParams& p);

/// Finite-difference check of a channel's derivative callable; returns the
/// worst mismatch over (du, dV) at step h.
double channel_derivative_check(const ParametrizedChannel& ch, double theta, double h = 1e-5);

}  // namespace gqf

#endif
