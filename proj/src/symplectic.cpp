// SPDX-License-Identifier: Apache-2.0
#include "gqf/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "gqf/errors.hpp"

namespace gqf {

namespace {

constexpr double kPhysicalityTol = 1e-8;
constexpr double kSingularTol = 1e-12;

Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

int modes_of(const Mat& V) {
    if (V.rows() != V.cols() || V.rows() % 2 != 0 || V.rows() == 0) {
        throw validation_error("NonPhysicalCovariance", "covariance must be 2n x 2n");
    }
    return static_cast<int>(V.rows() / 2);
}

double acoth(double x) { return std::atanh(1.0 / x); }

}  // namespace

SymplecticForm SymplecticForm::of(int n_modes) {
    return SymplecticForm{n_modes, omega_matrix(n_modes)};
}

Mat omega_matrix(int n_modes) {
    Mat om = Mat::Zero(2 * n_modes, 2 * n_modes);
    for (int j = 0; j < n_modes; ++j) {
        om(2 * j, 2 * j + 1) = 1.0;
        om(2 * j + 1, 2 * j) = -1.0;
    }
    return om;
}

GaussianState::GaussianState(Vec mean_in, Mat cov_in)
    : n_modes(modes_of(cov_in)), mean(std::move(mean_in)), cov(symmetrized(cov_in)) {
    if (mean.size() != cov.rows()) {
        throw validation_error("NonPhysicalCovariance", "mean length must be 2n");
    }
    if ((cov_in - cov_in.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, cov_in.cwiseAbs().maxCoeff())) {
        throw validation_error("NonPhysicalCovariance", "covariance not symmetric");
    }
    const auto nu = symplectic_eigenvalues(cov);
    if (nu.back() < 0.5 - kPhysicalityTol) {
        throw validation_error("NonPhysicalCovariance",
                               "symplectic eigenvalue " + std::to_string(nu.back()) + " < 1/2");
    }
}

GaussianState GaussianUnitary::apply(const GaussianState& s) const {
    return GaussianState(S * s.mean + d, S * s.cov * S.transpose());
}

GaussianUnitary GaussianUnitary::inverse() const {
    Mat Sinv = S.inverse();
    return GaussianUnitary{Sinv, -Sinv * d};
}

GaussianUnitary GaussianUnitary::compose(const GaussianUnitary& other) const {
    return GaussianUnitary{S * other.S, S * other.d + d};
}

GaussianUnitary GaussianUnitary::identity(int n_modes) {
    return GaussianUnitary{Mat::Identity(2 * n_modes, 2 * n_modes), Vec::Zero(2 * n_modes)};
}

WilliamsonDecomposition williamson(const Mat& V) {
    const int n = modes_of(V);
    Eigen::SelfAdjointEigenSolver<Mat> vs(symmetrized(V));
    if (vs.eigenvalues()(0) <= 0.0) {
        throw validation_error("NotPositiveDefinite", "covariance must be positive definite");
    }
    Mat L = vs.operatorSqrt();
    const Mat om = omega_matrix(n);
    CMat M = L * (Complex(0, 1) * om) * L;  // Hermitian
    Eigen::SelfAdjointEigenSolver<CMat> es(M);

    struct Pair {
        double nu;
        CVec w;
    };
    std::vector<Pair> pos;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k) > 0.0) pos.push_back({es.eigenvalues()(k), es.eigenvectors().col(k)});
    }
    if (static_cast<int>(pos.size()) != n) {
        throw numerical_error("NumericalBreakdown", "williamson: eigenvalue pairing failed");
    }
    // deterministic phase: largest-magnitude component made real positive
    for (auto& p : pos) {
        Eigen::Index imax = 0;
        p.w.cwiseAbs().maxCoeff(&imax);
        Complex ph = p.w(imax) / std::abs(p.w(imax));
        p.w /= ph;
    }
    std::sort(pos.begin(), pos.end(), [](const Pair& a, const Pair& b) {
        if (std::abs(a.nu - b.nu) > 1e-14 * std::max(a.nu, b.nu)) return a.nu > b.nu;
        for (Eigen::Index i = 0; i < a.w.size(); ++i) {
            if (a.w(i).real() != b.w(i).real()) return a.w(i).real() < b.w(i).real();
            if (a.w(i).imag() != b.w(i).imag()) return a.w(i).imag() < b.w(i).imag();
        }
        return false;
    });

    Mat T(2 * n, 2 * n);
    std::vector<double> nu(n);
    for (int j = 0; j < n; ++j) {
        nu[j] = pos[j].nu;
        Vec a = std::sqrt(2.0) * pos[j].w.real();
        Vec b = -std::sqrt(2.0) * pos[j].w.imag();
        T.col(2 * j) = a / std::sqrt(nu[j]);
        T.col(2 * j + 1) = b / std::sqrt(nu[j]);
    }
    return WilliamsonDecomposition{L * T, std::move(nu)};
}

std::vector<double> symplectic_eigenvalues(const Mat& V) {
    const int n = modes_of(V);
    const Mat om = omega_matrix(n);
    Eigen::ComplexEigenSolver<CMat> es(CMat(Complex(0, 1) * om * V), false);
    std::vector<double> mags;
    mags.reserve(2 * n);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        mags.push_back(std::abs(es.eigenvalues()(k)));
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    std::vector<double> nu(mags.begin(), mags.begin() + n);
    return nu;
}

GibbsForm gibbs_from_covariance(const Mat& V, double epsilon) {
    const int n = modes_of(V);
    if (epsilon < 0.0) throw validation_error("NonPhysicalCovariance", "epsilon must be >= 0");
    auto wd = williamson(V);
    if (wd.nu.back() < 0.5 - kPhysicalityTol) {
        throw validation_error("NonPhysicalCovariance",
                               "symplectic eigenvalue " + std::to_string(wd.nu.back()) + " < 1/2");
    }
    double eps_used = 0.0;
    Vec g(2 * n);
    for (int j = 0; j < n; ++j) {
        double nu = wd.nu[j];
        if (nu < 0.5 + epsilon) {
            if (epsilon <= 0.0 && nu < 0.5 + kSingularTol) {
                throw validation_error("SingularWithoutRegularization",
                                       "pure mode (nu = " + std::to_string(nu) +
                                           ") requires epsilon > 0");
            }
            if (nu < 0.5 + epsilon) {
                nu = 0.5 + epsilon;
                eps_used = epsilon;
            }
        }
        const double gj = 2.0 * acoth(2.0 * nu);
        g(2 * j) = gj;
        g(2 * j + 1) = gj;
    }
    Mat Sinv = wd.S.inverse();
    Mat G = symmetrized(Sinv.transpose() * g.asDiagonal() * Sinv);
    return GibbsForm{n, std::move(G), Vec::Zero(2 * n), eps_used};
}

GibbsForm gibbs_from_state(const GaussianState& s, double epsilon) {
    GibbsForm g = gibbs_from_covariance(s.cov, epsilon);
    g.u = s.mean;
    return g;
}

Mat covariance_from_gibbs(const GibbsForm& g) {
    const int n = g.n_modes;
    const Mat om = omega_matrix(n);
    CMat iOmG = Complex(0, 1) * om * g.G;
    Eigen::ComplexEigenSolver<CMat> probe(iOmG, false);
    const double scale = std::max(1.0, g.G.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < probe.eigenvalues().size(); ++k) {
        if (std::abs(probe.eigenvalues()(k)) < 1e-12 * scale) {
            throw validation_error("DegenerateGibbs", "i Omega G has an eigenvalue at zero");
        }
    }
    CMat E = matrix_exp(iOmG);
    CMat I = CMat::Identity(2 * n, 2 * n);
    CMat W = -(E - I).partialPivLu().solve(I + E);
    CMat Vc = -W * (Complex(0, 1) * om) / 2.0;
    return symmetrized(require_real(Vc, 1e-9, "covariance_from_gibbs"));
}

GaussianState state_builder(double nbar, double r, double theta_s, Complex alpha) {
    if (nbar < 0.0) throw validation_error("NonPhysicalCovariance", "nbar must be >= 0");
    const double nu = nbar + 0.5;
    Mat R(2, 2);
    const double c = std::cos(theta_s / 2.0), s = std::sin(theta_s / 2.0);
    R << c, -s, s, c;
    Mat core(2, 2);
    core << std::exp(-2.0 * r), 0.0, 0.0, std::exp(2.0 * r);
    Mat cov = nu * R * core * R.transpose();
    Vec mean(2);
    mean << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
    return GaussianState(mean, cov);
}

CMat gibbs_phase_matrix(const Mat& G) {
    const int n = modes_of(G);
    return matrix_exp(CMat(Complex(0, 1) * omega_matrix(n) * G));
}

std::vector<double> gibbs_symplectic_spectrum(const Mat& G) {
    const int n = modes_of(G);
    Eigen::ComplexEigenSolver<CMat> es(CMat(Complex(0, 1) * omega_matrix(n) * G), false);
    std::vector<double> v;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        v.push_back(es.eigenvalues()(k).real());
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize(n);
    return v;
}

}  // namespace gqf
