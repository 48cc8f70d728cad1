// SPDX-License-Identifier: Apache-2.0
#include "gqf/matfunc.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "gqf/errors.hpp"

namespace gqf {

namespace {

constexpr double kBranchCutImagTol = 1e-13;

void check_branch_cut(const CVec& eigenvalues, double scale, const char* op) {
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const Complex lam = eigenvalues(i);
        if (std::abs(lam) < 1e-300 * scale ||
            (lam.real() < 0.0 && std::abs(lam.imag()) <= kBranchCutImagTol * scale)) {
            throw numerical_error("BranchCutEigenvalue",
                                  std::string(op) + ": eigenvalue on the closed negative real axis");
        }
    }
}

template <typename ScalarFn>
CMat via_eigendecomposition(const CMat& a, ScalarFn f) {
    Eigen::ComplexEigenSolver<CMat> es(a);
    const CMat& v = es.eigenvectors();
    CVec lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = f(lam(i));
    return v * lam.asDiagonal() * v.inverse();
}

}  // namespace

double eigenvector_condition(const CMat& a) {
    Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/true);
    Eigen::JacobiSVD<CMat> svd(es.eigenvectors());
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / s(s.size() - 1);
}

CMat matrix_exp(const CMat& a) { return a.exp(); }

CMat matrix_sqrt_principal(const CMat& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    Eigen::ComplexEigenSolver<CMat> es(a);
    check_branch_cut(es.eigenvalues(), scale, "matrix_sqrt_principal");
    Eigen::JacobiSVD<CMat> svd(es.eigenvectors());
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0
                            ? s(0) / s(s.size() - 1)
                            : std::numeric_limits<double>::infinity();
    if (cond < 1e8) {
        CVec lam = es.eigenvalues();
        for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(lam(i));
        return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().inverse();
    }
    return a.sqrt();  // Schur-based
}

CMat matrix_log_principal(const CMat& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    Eigen::ComplexEigenSolver<CMat> es(a);
    check_branch_cut(es.eigenvalues(), scale, "matrix_log_principal");
    Eigen::JacobiSVD<CMat> svd(es.eigenvectors());
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0
                            ? s(0) / s(s.size() - 1)
                            : std::numeric_limits<double>::infinity();
    if (cond < 1e8) {
        CVec lam = es.eigenvalues();
        for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::log(lam(i));
        return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().inverse();
    }
    return a.log();  // Schur-based
}

Mat require_real(const CMat& a, double tol, const char* what) {
    const double scale = std::max(1.0, a.real().cwiseAbs().maxCoeff());
    const double imag = a.imag().cwiseAbs().maxCoeff();
    if (imag > tol * scale) {
        throw numerical_error("NumericalBreakdown",
                              std::string(what) + ": imaginary residue " + std::to_string(imag));
    }
    return a.real();
}

}  // namespace gqf
