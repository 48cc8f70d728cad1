// SPDX-License-Identifier: Apache-2.0
#include "gqf/measurement.hpp"

#include <cmath>

#include "gqf/errors.hpp"

namespace gqf {

namespace {

constexpr double kGmZeroTol = 1e-10;
constexpr double kPureNuTol = 1e-9;

Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

double gfun(double nbar) { return 2.0 * std::atanh(1.0 / (2.0 * nbar + 1.0)); }

/// Symplectic normal form of a symmetric 2x2 matrix A != 0:
/// returns (kind, S) with S symplectic (unit determinant) such that
///   elliptic   (det A > 0): S^T A S = sign * sqrt(det A) * I
///   hyperbolic (det A < 0): S^T A S = sqrt(|det A|) * [[0,1],[1,0]]
///   parabolic  (det A = 0): S^T A S = d * diag(1, 0) or d * diag(0, 1)
enum class NormalKind { Elliptic, Hyperbolic, Parabolic };

std::pair<NormalKind, Mat> symplectic_normal_form_2x2(const Mat& A, double zero_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    Vec w = es.eigenvalues();  // ascending
    Mat R = es.eigenvectors();
    if (R.determinant() < 0) R.col(0) *= -1.0;
    // R^T A R = diag(w0, w1)
    const double scale = std::max(std::abs(w(0)), std::abs(w(1)));
    const double prod = w(0) * w(1);
    if (std::abs(prod) <= zero_tol * scale * scale) {
        return {NormalKind::Parabolic, R};
    }
    if (prod > 0.0) {
        const double s = std::pow(std::abs(w(1)) / std::abs(w(0)), 0.25);
        Mat Sq(2, 2);
        Sq << s, 0.0, 0.0, 1.0 / s;
        return {NormalKind::Elliptic, Mat(R * Sq)};
    }
    // hyperbolic: order so the positive eigenvalue comes first
    if ((R.transpose() * A * R)(0, 0) < 0.0) {
        Mat Rsw(2, 2);
        Rsw << 0.0, -1.0, 1.0, 0.0;  // proper rotation swapping axes
        R = R * Rsw;
    }
    const double a = std::abs((R.transpose() * A * R)(0, 0));
    const double b = std::abs((R.transpose() * A * R)(1, 1));
    const double s = std::pow(b / a, 0.25);
    Mat Sq(2, 2);
    Sq << s, 0.0, 0.0, 1.0 / s;
    const double c = std::cos(M_PI / 4.0), sn = std::sin(M_PI / 4.0);
    Mat R4(2, 2);
    R4 << c, -sn, sn, c;
    return {NormalKind::Hyperbolic, Mat(R * Sq * R4)};
}

bool is_pure(const GaussianState& s) {
    return symplectic_eigenvalues(s.cov).back() < 0.5 + kPureNuTol;
}

}  // namespace

std::string measurement_type_name(const MeasurementType& t) {
    if (std::holds_alternative<NumberResolving>(t)) return "number";
    if (std::holds_alternative<XpPlusPxEigenbasis>(t)) return "xp_px";
    if (std::holds_alternative<PureStateProjector>(t)) return "pure_projector";
    const auto& h = std::get<Homodyne>(t);
    return std::abs(h.angle - M_PI / 2.0) < 1e-12 ? "homodyne_p"
           : std::abs(h.angle) < 1e-12            ? "homodyne_x"
                                                  : "homodyne";
}

double gm_residual(const Mat& GM, const Mat& G0, const Mat& G1) {
    CMat em = gibbs_phase_matrix(GM);
    CMat e0 = gibbs_phase_matrix(G0);
    CMat e1 = gibbs_phase_matrix(G1);
    return (em * e1 * em - e0).norm() / e0.norm();
}

Mat solve_gm(const Mat& G0, const Mat& G1) {
    const int n = static_cast<int>(G0.rows()) / 2;
    CMat e1h = gibbs_phase_matrix(Mat(0.5 * G1));
    CMat e1h_inv = gibbs_phase_matrix(Mat(-0.5 * G1));
    CMat P = e1h * gibbs_phase_matrix(G0) * e1h;
    CMat em = e1h_inv * matrix_sqrt_principal(P) * e1h_inv;
    CMat L = matrix_log_principal(em);
    Mat GM = require_real(CMat(Complex(0, 1) * omega_matrix(n) * L), 1e-9, "solve_gm");
    GM = symmetrized(GM);
    const double res = gm_residual(GM, G0, G1);
    if (res > 1e-9) {
        throw numerical_error("ResidualTooLarge",
                              "solve_gm residual " + std::to_string(res));
    }
    return GM;
}

MOperatorForm m_operator(const GaussianState& s0, const GaussianState& s1, double epsilon) {
    const int n = s0.n_modes;
    if (n != s1.n_modes) {
        throw validation_error("NonPhysicalCovariance", "states must have equal mode count");
    }
    GibbsForm g0 = gibbs_from_state(s0, epsilon);
    GibbsForm g1 = gibbs_from_state(s1, epsilon);
    const Vec v0 = s0.mean - s1.mean;
    Mat GM = solve_gm(g0.G, g1.G);
    const double res = gm_residual(GM, g0.G, g1.G);
    const double gscale = std::max(g0.G.cwiseAbs().maxCoeff(), g1.G.cwiseAbs().maxCoeff());

    if (GM.cwiseAbs().maxCoeff() < kGmZeroTol * gscale) {
        // equal Gibbs matrices: M ~ D(u1) exp[vM^T Q] D(u1)^dag with
        // vM = S^{-T} [ (+) tanh(g_j/2) 1_2 ] S^{-1} (u0 - u1)
        auto wd = williamson(s1.cov);
        Vec t(2 * n);
        for (int j = 0; j < n; ++j) {
            const double nu = std::max(wd.nu[j], 0.5 + epsilon);
            const double th = std::tanh(gfun(nu - 0.5) / 2.0);
            t(2 * j) = th;
            t(2 * j + 1) = th;
        }
        Mat Sinv = wd.S.inverse();
        Vec vM = Sinv.transpose() * t.asDiagonal() * Sinv * v0;
        return MOperatorForm{s1.mean, Mat::Zero(2 * n, 2 * n), std::move(vM), std::nullopt, res};
    }

    Mat GK = gk_matrix(g0.G, g1.G);
    const CMat I = CMat::Identity(2 * n, 2 * n);
    CMat e0m = gibbs_phase_matrix(Mat(-g0.G));
    CMat e1h = gibbs_phase_matrix(Mat(0.5 * g1.G));
    CMat e1hm = gibbs_phase_matrix(Mat(-0.5 * g1.G));
    CMat ekm = gibbs_phase_matrix(Mat(-GK));
    CMat ekhm = gibbs_phase_matrix(Mat(-0.5 * GK));
    CMat emm = gibbs_phase_matrix(Mat(-GM));

    CVec rhs = e1hm * (e0m - I) * v0.cast<Complex>();
    CVec uK = (ekm - I).partialPivLu().solve(rhs);
    CVec m = e1h * (ekhm - I) * uK;
    // (e^{-i Om GM} - 1) is singular exactly on the homodyne locus; the
    // minimal-norm solution drops the null component, which GM annihilates,
    // so vM = GM uM is well defined across the boundary.
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(emm - I);
    CVec uMc = cod.solve(m);
    Vec uM = require_real(CMat(uMc), 1e-7, "m_operator uM").col(0);
    Vec vM = GM * uM;
    return MOperatorForm{s1.mean, std::move(GM), std::move(vM), std::move(uM), res};
}

CanonicalPair canonicalize_pair(const GaussianState& s0, const GaussianState& s1) {
    if (s0.n_modes != 1 || s1.n_modes != 1) {
        throw validation_error("NonPhysicalCovariance", "canonicalize_pair is single-mode");
    }
    auto wd = williamson(s1.cov);
    // rotation freedom: diagonalize the transformed rho0 covariance with
    // cov_11 >= cov_22
    Mat S1inv = wd.S.inverse();
    Mat A = symmetrized(S1inv * s0.cov * S1inv.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    Mat R(2, 2);  // columns: eigenvector of larger eigenvalue first
    R.col(0) = es.eigenvectors().col(1);
    R.col(1) = es.eigenvectors().col(0);
    if (R.determinant() < 0) R.col(1) *= -1.0;
    GaussianUnitary V_hat{wd.S * R, s1.mean};
    GaussianUnitary inv = V_hat.inverse();
    GaussianState rho0c = inv.apply(s0);
    GaussianState rho1c = inv.apply(s1);
    const double nbar1 = wd.nu[0] - 0.5;
    const auto nu0 = symplectic_eigenvalues(rho0c.cov);
    const double nbar0 = nu0[0] - 0.5;
    // paper orientation: V0 = nu0 diag(e^{-2 r0}, e^{+2 r0})
    const double r0 = 0.25 * std::log(rho0c.cov(1, 1) / rho0c.cov(0, 0));
    return CanonicalPair{std::move(V_hat), std::move(rho0c), std::move(rho1c), nbar0, nbar1, r0};
}

SweepPoint classify_canonical_point(double nbar0, double nbar1, double r0, double tol) {
    const double g0 = gfun(nbar0), g1 = gfun(nbar1);
    Mat G0(2, 2), G1(2, 2);
    G0 << g0 * std::exp(2.0 * r0), 0.0, 0.0, g0 * std::exp(-2.0 * r0);
    G1 << g1, 0.0, 0.0, g1;
    Mat GM = solve_gm(G0, G1);
    const double dx = GM(0, 0), dp = GM(1, 1);
    const double d1 = std::max(dx, dp), d2 = std::min(dx, dp);
    const double scale = std::max(dx * dx, dp * dp);
    const double gscale = std::max(g0, g1);
    SweepPoint pt{r0, nbar0, SweepType::Number, d1, d2, 0.0};
    if (std::max(std::abs(dx), std::abs(dp)) < 1e-6 * gscale) {
        pt.type = SweepType::Intersection;
        pt.boundary_distance = 0.0;
        return pt;
    }
    pt.boundary_distance = std::abs(dx * dp) / scale;
    if (pt.boundary_distance <= tol) {
        // vanishing x^2 coefficient leaves exp[-dp p^2/2]: measure p, and
        // vice versa
        pt.type = std::abs(dx) < std::abs(dp) ? SweepType::HomodyneP : SweepType::HomodyneX;
    } else if (dx * dp > 0.0) {
        pt.type = SweepType::Number;
    } else {
        pt.type = SweepType::XpPx;
    }
    return pt;
}

ClassifyResult classify(const GaussianState& s0, const GaussianState& s1, double tol) {
    if (s0.n_modes != 1 || s1.n_modes != 1) {
        throw validation_error("NonPhysicalCovariance", "classify is single-mode");
    }
    if (is_pure(s1)) {
        return ClassifyResult{PureStateProjector{s1}, 0.0, 0.0, 0.0, false};
    }
    if (is_pure(s0)) {
        return ClassifyResult{PureStateProjector{s0}, 0.0, 0.0, 0.0, false};
    }
    CanonicalPair cp = canonicalize_pair(s0, s1);
    SweepPoint pt = classify_canonical_point(cp.nbar0, cp.nbar1, cp.r0, tol);
    const Mat S = cp.V_hat.S;
    const Mat SinvT = S.inverse().transpose();

    if (pt.type == SweepType::Intersection) {
        // equal Gibbs matrices: quadrature along vM (lab frame)
        MOperatorForm mop = m_operator(s0, s1);
        double angle = 0.0;
        bool degenerate = mop.vM.norm() < 1e-12;
        if (!degenerate) angle = std::fmod(std::atan2(mop.vM(1), mop.vM(0)) + M_PI, M_PI);
        return ClassifyResult{Homodyne{angle, cp.V_hat.d}, pt.d1, pt.d2, 0.0, true};
    }
    if (pt.type == SweepType::HomodyneX || pt.type == SweepType::HomodyneP) {
        Vec nvec(2);
        if (pt.type == SweepType::HomodyneX) {
            nvec << 1.0, 0.0;
        } else {
            nvec << 0.0, 1.0;
        }
        Vec w = SinvT * nvec;
        double angle = std::fmod(std::atan2(w(1), w(0)) + M_PI, M_PI);
        return ClassifyResult{Homodyne{angle, cp.V_hat.d}, pt.d1, pt.d2, pt.boundary_distance,
                              true};
    }

    // types (i)/(ii): assemble the pre-unitary from the canonical-frame
    // M-operator displacement and the symplectic normal form of GM
    MOperatorForm mop_c = m_operator(cp.rho0_canonical, cp.rho1_canonical);
    Vec uc = mop_c.uM ? Vec(*mop_c.uM + mop_c.u1) : mop_c.u1;
    auto [kind, Sn] = symplectic_normal_form_2x2(mop_c.GM, tol);
    GaussianUnitary pre{S * Sn, S * uc + cp.V_hat.d};
    if (pt.type == SweepType::Number) {
        return ClassifyResult{NumberResolving{std::move(pre)}, pt.d1, pt.d2,
                              pt.boundary_distance, false};
    }
    return ClassifyResult{XpPlusPxEigenbasis{std::move(pre)}, pt.d1, pt.d2,
                          pt.boundary_distance, false};
}

std::array<double, 3> appendix_b_residuals(double d1, double d2, double r0, double nbar0,
                                           double nbar1) {
    if (nbar0 <= 0.0 || nbar1 <= 0.0) {
        throw validation_error("DomainError", "appendix_b_residuals requires nbar > 0");
    }
    const Complex s2(d1 * d2, 0.0);
    const Complex s = std::sqrt(s2);
    auto sinhc = [](Complex z) {  // sinh(z)/z
        return std::abs(z) < 1e-6 ? 1.0 + z * z / 6.0 : std::sinh(z) / z;
    };
    const Complex ch2 = std::cosh(2.0 * s);
    const Complex shc2 = sinhc(2.0 * s);
    // sinh g1 and cosh g1 in terms of thermal quanta
    const double sh1 = (2.0 * nbar1 + 1.0) / (2.0 * nbar1 * (nbar1 + 1.0));
    const double ch1 = (2.0 * nbar1 * nbar1 + 2.0 * nbar1 + 1.0) / (2.0 * nbar1 * (nbar1 + 1.0));
    // sinh^2(s)/s^2 (analytic through s^2 <= 0)
    const Complex shc_sq = sinhc(s) * sinhc(s);
    const Complex c_sq = 0.5 * (ch2 + 1.0);

    const Complex L0 = (d1 + d2) * sh1 * shc2 + ch1 * ch2;
    const Complex L1 =
        Complex(0, -1) * (d1 - d2) * (ch1 * shc2 + 0.5 * sh1 * (d1 + d2) * shc_sq);
    const Complex L2 =
        -ch1 * (d1 + d2) * shc2 - sh1 * (c_sq + 0.5 * shc_sq * (d1 * d1 + d2 * d2));

    const double pref0 = (2.0 * nbar0 * nbar0 + 2.0 * nbar0 + 1.0) / (2.0 * nbar0 * (nbar0 + 1.0));
    const double pref1 = (2.0 * nbar0 + 1.0) / (2.0 * nbar0 * (nbar0 + 1.0));
    const Complex R0(pref0, 0.0);
    const Complex R1(0.0, pref1 * std::sinh(2.0 * r0));
    const Complex R2(-pref1 * std::cosh(2.0 * r0), 0.0);

    return {std::abs(L0 - R0), std::abs(L1 - R1), std::abs(L2 - R2)};
}

const char* sweep_type_name(SweepType t) {
    switch (t) {
        case SweepType::Number: return "number";
        case SweepType::XpPx: return "xp_px";
        case SweepType::HomodyneX: return "homodyne_x";
        case SweepType::HomodyneP: return "homodyne_p";
        case SweepType::Intersection: return "intersection";
    }
    return "unknown";
}

std::vector<SweepPoint> sweep_classification(double nbar1, const GridSpec& r0_grid,
                                             const GridSpec& nbar0_grid, double tol) {
    if (nbar1 <= 0.0) throw validation_error("DomainError", "nbar1 must be > 0");
    std::vector<SweepPoint> out;
    out.reserve(static_cast<size_t>(r0_grid.count) * nbar0_grid.count);
    for (int i = 0; i < r0_grid.count; ++i) {
        for (int j = 0; j < nbar0_grid.count; ++j) {
            const double r0 = r0_grid.at(i);
            const double nbar0 = nbar0_grid.at(j);
            if (nbar0 <= 0.0) {
                throw validation_error("DomainError", "nbar0 grid must be > 0");
            }
            out.push_back(classify_canonical_point(nbar0, nbar1, r0, tol));
        }
    }
    return out;
}

double homodyne_boundary_ratio(double nbar0, double nbar1) {
    return nbar0 * (nbar0 + 1.0) * (2.0 * nbar1 + 1.0) /
           (nbar1 * (nbar1 + 1.0) * (2.0 * nbar0 + 1.0));
}

}  // namespace gqf
