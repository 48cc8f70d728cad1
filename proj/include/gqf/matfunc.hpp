// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_MATFUNC_HPP
#define GQF_MATFUNC_HPP

#include <Eigen/Dense>
#include <complex>

namespace gqf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Matrix exponential of a dense complex matrix (scaling and squaring).
CMat matrix_exp(const CMat& a);

/// Principal matrix square root: B with B^2 = A and spec(B) in the right
/// half-plane.  Uses an eigendecomposition when the eigenvector basis is
/// well conditioned (< 1e8) and falls back to a Schur-based method
/// otherwise.  Throws BranchCutEigenvalue if A has an eigenvalue on the
/// closed negative real axis.
CMat matrix_sqrt_principal(const CMat& a);

/// Principal matrix logarithm, same eigendecomposition/Schur strategy
/// and branch-cut error as matrix_sqrt_principal.
CMat matrix_log_principal(const CMat& a);

/// Condition number of the eigenvector matrix of a (via SVD); large values
/// mean f(A) through the eigendecomposition is unreliable.
double eigenvector_condition(const CMat& a);

/// Strip an imaginary residue expected to be numerical noise.  Throws
/// NumericalBreakdown when max |Im| exceeds tol * max(1, max |Re|).
Mat require_real(const CMat& a, double tol, const char* what);

}  // namespace gqf

#endif
