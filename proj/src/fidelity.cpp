// SPDX-License-Identifier: Apache-2.0
#include "gqf/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "gqf/errors.hpp"

namespace gqf {

namespace {

CMat phase_product(const Mat& G0, const Mat& G1) {
    CMat e1h = gibbs_phase_matrix(Mat(0.5 * G1));
    return e1h * gibbs_phase_matrix(G0) * e1h;
}

}  // namespace

Mat gk_matrix(const Mat& G0, const Mat& G1) {
    const int n = static_cast<int>(G0.rows()) / 2;
    CMat P = phase_product(G0, G1);
    CMat L = matrix_log_principal(P);
    CMat GK = Complex(0, 1) * omega_matrix(n) * L;
    Mat g = require_real(GK, 1e-9, "gk_matrix");
    return 0.5 * (g + g.transpose());
}

std::vector<double> gk_spectrum(const Mat& G0, const Mat& G1) {
    const int n = static_cast<int>(G0.rows()) / 2;
    Eigen::ComplexEigenSolver<CMat> es(phase_product(G0, G1), false);
    std::vector<double> mods;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        mods.push_back(std::abs(es.eigenvalues()(k)));
    }
    // eigenvalues come in (lambda, 1/lambda) pairs; the large half is the
    // numerically reliable one
    std::sort(mods.begin(), mods.end(), std::greater<>());
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) {
        if (mods[j] <= 0.0) {
            throw numerical_error("NumericalBreakdown", "gk_spectrum: nonpositive eigenvalue");
        }
        g[j] = std::log(mods[j]);
    }
    return g;
}

double state_overlap(const GaussianState& s0, const GaussianState& s1) {
    if (s0.n_modes != s1.n_modes) {
        throw validation_error("NonPhysicalCovariance", "states must have equal mode count");
    }
    Mat Vs = s0.cov + s1.cov;
    Vec d = s0.mean - s1.mean;
    Eigen::LLT<Mat> llt(Vs);
    if (llt.info() != Eigen::Success) {
        throw numerical_error("NumericalBreakdown", "overlap: V0 + V1 not positive definite");
    }
    const double quad = d.dot(llt.solve(d));
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < Vs.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
    return std::exp(-0.5 * quad - logdet);
}

FidelityResult fidelity_gaussian(const GaussianState& s0, const GaussianState& s1,
                                 double epsilon) {
    GibbsForm g0 = gibbs_from_state(s0, epsilon);
    GibbsForm g1 = gibbs_from_state(s1, epsilon);
    std::vector<double> gk = gk_spectrum(g0.G, g1.G);
    double prod = 1.0;
    for (double g : gk) prod /= std::tanh(g / 4.0);
    const double overlap = state_overlap(s0, s1);
    double f = overlap * prod;
    if (f < -1e-9 || f > 1.0 + 1e-9) {
        throw numerical_error("NumericalBreakdown",
                              "fidelity " + std::to_string(f) + " outside [0,1] tolerance band");
    }
    f = std::clamp(f, 0.0, 1.0);
    return FidelityResult{f, std::move(gk), overlap,
                          std::max(g0.epsilon_used, g1.epsilon_used)};
}

double bhattacharyya(const std::vector<double>& p0, const std::vector<double>& p1) {
    if (p0.size() != p1.size()) {
        throw validation_error("SupportMismatch", "distributions differ in support size");
    }
    double n0 = 0.0, n1 = 0.0, bc = 0.0;
    for (size_t i = 0; i < p0.size(); ++i) {
        n0 += p0[i];
        n1 += p1[i];
        bc += std::sqrt(std::max(0.0, p0[i]) * std::max(0.0, p1[i]));
    }
    if (std::abs(n0 - 1.0) > 1e-6 || std::abs(n1 - 1.0) > 1e-6) {
        throw validation_error("SupportMismatch", "distributions not normalized within 1e-6");
    }
    return bc * bc;
}

double bhattacharyya_sampled(const std::vector<double>& x, const std::vector<double>& p0,
                             const std::vector<double>& p1) {
    if (x.size() != p0.size() || x.size() != p1.size() || x.size() < 2) {
        throw validation_error("SupportMismatch", "grids differ in size");
    }
    auto trapz = [&](auto f) {
        double acc = 0.0;
        for (size_t i = 0; i + 1 < x.size(); ++i) {
            acc += 0.5 * (x[i + 1] - x[i]) * (f(i) + f(i + 1));
        }
        return acc;
    };
    const double n0 = trapz([&](size_t i) { return p0[i]; });
    const double n1 = trapz([&](size_t i) { return p1[i]; });
    if (std::abs(n0 - 1.0) > 1e-6 || std::abs(n1 - 1.0) > 1e-6) {
        throw validation_error("SupportMismatch", "densities not normalized within 1e-6");
    }
    const double bc =
        trapz([&](size_t i) { return std::sqrt(std::max(0.0, p0[i]) * std::max(0.0, p1[i])); });
    return bc * bc;
}

}  // namespace gqf
