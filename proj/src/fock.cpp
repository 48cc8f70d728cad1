// SPDX-License-Identifier: Apache-2.0
#include "gqf/fock.hpp"

#include <algorithm>
#include <cmath>

#include "gqf/errors.hpp"

namespace gqf {

namespace {

constexpr double kSupportTol = 1e-12;

/// y <- exp(A) v for a banded matrix given as (offset, band) pairs, via
/// segmented truncated Taylor.  Bands: band[k] multiplies component k+offset
/// (offset may be negative).
struct BandedOp {
    int dim;
    std::vector<std::pair<int, CVec>> bands;  // (offset, coefficients)

    CVec apply(const CVec& v) const {
        CVec y = CVec::Zero(dim);
        for (const auto& [off, coef] : bands) {
            for (int i = 0; i < dim; ++i) {
                const int j = i + off;
                if (j >= 0 && j < dim) y(i) += coef(i) * v(j);
            }
        }
        return y;
    }

    double norm_estimate() const {
        double s = 0.0;
        for (const auto& [off, coef] : bands) s += coef.cwiseAbs().maxCoeff();
        return s;
    }
};

CVec expmv(const BandedOp& op, CVec v) {
    const double nrm = op.norm_estimate();
    const int segments = std::max(1, static_cast<int>(std::ceil(nrm / 2.0)));
    for (int s = 0; s < segments; ++s) {
        CVec term = v;
        CVec acc = v;
        for (int k = 1; k < 60; ++k) {
            term = op.apply(term) / (static_cast<double>(k) * segments);
            acc += term;
            if (term.norm() < 1e-18 * acc.norm()) break;
        }
        v = acc;
    }
    return v;
}

BandedOp displacement_generator(Complex alpha, int dim) {
    // alpha a^dag - conj(alpha) a
    CVec up(dim), dn(dim);
    up.setZero();
    dn.setZero();
    for (int i = 0; i < dim; ++i) {
        if (i - 1 >= 0) up(i) = alpha * std::sqrt(static_cast<double>(i));        // a^dag
        if (i + 1 < dim) dn(i) = -std::conj(alpha) * std::sqrt(i + 1.0);          // -conj a
    }
    return BandedOp{dim, {{-1, up}, {1, dn}}};
}

int working_dim(double r, Complex alpha, int cutoff, int m_max) {
    const double spread = std::exp(2.0 * std::abs(r));
    const double disp = std::abs(alpha);
    int dim = static_cast<int>(std::ceil((m_max + 14) * spread + 24.0 * (1.0 + disp) +
                                         8.0 * disp * disp));
    return std::max(dim, cutoff + 8);
}

/// Columns of S(xi) on |0..m_max> at dimension dim, from the squeezed-vacuum
/// closed form and the recurrence S|m> = (a^dag cosh r + a e^{-i th} sinh r) S|m-1> / sqrt(m).
std::vector<CVec> squeezed_number_columns(Complex xi, int m_max, int dim) {
    const double r = std::abs(xi);
    const double th = (r == 0.0) ? 0.0 : std::arg(xi);
    std::vector<CVec> cols;
    cols.reserve(m_max + 1);
    CVec c0 = CVec::Zero(dim);
    if (r == 0.0) {
        c0(0) = 1.0;
    } else {
        const Complex q = -std::exp(Complex(0, th)) * std::tanh(r);
        // <2k|S|0> = (cosh r)^{-1/2} q^k sqrt((2k)!)/(2^k k!); the ratio of
        // consecutive magnitudes is sqrt((2k-1)/(2k))
        double log_fact = 0.0;
        Complex qk = 1.0;
        for (int k = 0; 2 * k < dim; ++k) {
            if (k > 0) {
                log_fact += 0.5 * (std::log(2.0 * k - 1.0) - std::log(2.0 * k));
                qk *= q;
            }
            c0(2 * k) = qk * std::exp(log_fact) / std::sqrt(std::cosh(r));
        }
    }
    cols.push_back(c0);
    const double chr = std::cosh(r), shr = std::sinh(r);
    const Complex phase = std::exp(Complex(0, -th));
    for (int m = 1; m <= m_max; ++m) {
        const CVec& prev = cols.back();
        CVec cur = CVec::Zero(dim);
        for (int i = 0; i < dim; ++i) {
            Complex acc = 0.0;
            if (i - 1 >= 0) acc += chr * std::sqrt(static_cast<double>(i)) * prev(i - 1);
            if (i + 1 < dim) acc += phase * shr * std::sqrt(i + 1.0) * prev(i + 1);
            cur(i) = acc / std::sqrt(static_cast<double>(m));
        }
        cols.push_back(std::move(cur));
    }
    return cols;
}

CMat hermitian_sqrt(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    CVec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Hermite functions psi_n(x) for all n < cutoff at a point x.
void hermite_column(double x, int cutoff, Eigen::Ref<Vec> out) {
    out(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (cutoff > 1) out(1) = std::sqrt(2.0) * x * out(0);
    for (int n = 1; n + 1 < cutoff; ++n) {
        out(n + 1) = std::sqrt(2.0 / (n + 1.0)) * x * out(n) -
                     std::sqrt(n / (n + 1.0)) * out(n - 1);
    }
}

}  // namespace

CMat annihilation(int cutoff) {
    CMat a = CMat::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

CMat position_op(int cutoff) {
    CMat a = annihilation(cutoff);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

CMat momentum_op(int cutoff) {
    CMat a = annihilation(cutoff);
    return (a - a.adjoint()) / Complex(0.0, std::sqrt(2.0));
}

CMat number_op(int cutoff) {
    CVec d(cutoff);
    for (int n = 0; n < cutoff; ++n) d(n) = n;
    return d.asDiagonal();
}

CMat displacement_op(Complex alpha, int cutoff) {
    const int dim = cutoff + static_cast<int>(std::ceil(24.0 + 8.0 * std::norm(alpha)));
    BandedOp gen = displacement_generator(alpha, dim);
    CMat out(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m) {
        CVec e = CVec::Zero(dim);
        e(m) = 1.0;
        out.col(m) = expmv(gen, e).head(cutoff);
    }
    return out;
}

CMat squeeze_op(Complex xi, int cutoff) {
    const int dim = working_dim(std::abs(xi), 0.0, cutoff, cutoff);
    auto cols = squeezed_number_columns(xi, cutoff - 1, dim);
    CMat out(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m) out.col(m) = cols[m].head(cutoff);
    return out;
}

CMat rotation_op(double theta, int cutoff) {
    CVec d(cutoff);
    for (int n = 0; n < cutoff; ++n) d(n) = std::exp(Complex(0, -theta * n));
    return d.asDiagonal();
}

FockDensityMatrix build_state(double nbar, double r, double theta_s, Complex alpha, int cutoff) {
    if (cutoff < 2) throw validation_error("CutoffTooSmall", "cutoff must be >= 2");
    if (nbar < 0.0) throw validation_error("NonPhysicalCovariance", "nbar must be >= 0");
    // thermal weights to machine-negligible tail
    std::vector<double> p;
    double tail = 1.0;
    if (nbar == 0.0) {
        p = {1.0};
        tail = 0.0;
    } else {
        const double q = nbar / (nbar + 1.0);
        double w = 1.0 / (nbar + 1.0);
        while (tail > 1e-16 && static_cast<int>(p.size()) < 2000) {
            p.push_back(w);
            tail -= w;
            w *= q;
        }
    }
    const int m_max = static_cast<int>(p.size()) - 1;
    const int dim = working_dim(r, alpha, cutoff, m_max);

    auto cols = squeezed_number_columns(Complex(r * std::cos(theta_s), r * std::sin(theta_s)),
                                        m_max, dim);
    BandedOp dgen = displacement_generator(alpha, dim);
    CMat rho = CMat::Zero(cutoff, cutoff);
    double deficit = std::max(tail, 0.0);
    for (int m = 0; m <= m_max; ++m) {
        CVec c = (alpha == 0.0) ? cols[m] : expmv(dgen, cols[m]);
        const double col_norm2 = c.squaredNorm();
        if (std::abs(col_norm2 - 1.0) > 1e-10) {
            throw numerical_error("CutoffTooSmall",
                                  "internal working dimension too small (column norm " +
                                      std::to_string(col_norm2) + ")");
        }
        CVec head = c.head(cutoff);
        deficit += p[m] * std::max(0.0, 1.0 - head.squaredNorm());
        rho += (p[m] * head) * head.adjoint();
    }
    if (deficit >= 1e-6) {
        throw validation_error("CutoffTooSmall",
                               "trace deficit " + std::to_string(deficit) + " at cutoff " +
                                   std::to_string(cutoff));
    }
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return FockDensityMatrix{cutoff, std::move(rho), deficit};
}

int recommended_cutoff(double nbar, double r, Complex alpha, double target_deficit,
                       int floor_cutoff) {
    for (int n = floor_cutoff; n <= 4096; n = std::max(n + 10, n * 5 / 4)) {
        try {
            FockDensityMatrix s = build_state(nbar, r, 0.0, alpha, n);
            if (s.trace_deficit < target_deficit) return n;
        } catch (const Error&) {
            // deficit still too large; keep growing
        }
    }
    throw validation_error("CutoffTooSmall", "no adequate cutoff below 4096");
}

std::pair<Vec, Mat> fock_moments(const FockDensityMatrix& s) {
    const int n = s.cutoff;
    CMat x = position_op(n), pm = momentum_op(n);
    std::array<CMat, 2> Q = {x, pm};
    Vec mean(2);
    for (int j = 0; j < 2; ++j) mean(j) = (s.rho * Q[j]).trace().real();
    Mat V(2, 2);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            V(j, k) = 0.5 * (s.rho * (Q[j] * Q[k] + Q[k] * Q[j])).trace().real() -
                      mean(j) * mean(k);
        }
    }
    return {mean, V};
}

CMat m_operator_fock(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                     bool allow_rank_deficient) {
    Eigen::SelfAdjointEigenSolver<CMat> es(rho1.rho);
    const Vec& w = es.eigenvalues();
    const double wmax = w.maxCoeff();
    const double wmin_kept = kSupportTol * wmax;
    if (!allow_rank_deficient && w.minCoeff() < 1e-14 * wmax) {
        throw numerical_error("IllConditioned",
                              "rho1 condition number exceeds 1e14 (support pseudo-inverse "
                              "required); pass allow_rank_deficient");
    }
    CVec sh = CVec::Zero(w.size()), smh = CVec::Zero(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > wmin_kept) {
            sh(i) = std::sqrt(w(i));
            smh(i) = 1.0 / std::sqrt(w(i));
        }
    }
    CMat U = es.eigenvectors();
    CMat r1h = U * sh.asDiagonal() * U.adjoint();
    CMat r1mh = U * smh.asDiagonal() * U.adjoint();
    CMat K = r1h * rho0.rho * r1h;
    CMat M = r1mh * hermitian_sqrt(CMat(0.5 * (K + K.adjoint()))) * r1mh;
    return 0.5 * (M + M.adjoint().eval());
}

double fidelity_fock(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1) {
    CMat s1 = hermitian_sqrt(rho1.rho);
    CMat K = s1 * rho0.rho * s1;
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (K + K.adjoint())),
                                           Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        tr += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

double bc_under_povm(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1,
                     const OraclePovm& povm) {
    double bc = 0.0;
    for (const CMat& e : povm.elements) {
        const double p0 = std::max(0.0, (rho0.rho * e).trace().real());
        const double p1 = std::max(0.0, (rho1.rho * e).trace().real());
        bc += std::sqrt(p0 * p1);
    }
    return bc * bc;
}

std::pair<double, double> fuchs_caves_conditions(const FockDensityMatrix& rho0,
                                                 const FockDensityMatrix& rho1,
                                                 const OraclePovm& povm, double weight_floor) {
    CMat s0 = hermitian_sqrt(rho0.rho);
    CMat s1 = hermitian_sqrt(rho1.rho);
    CMat A = s0 * s1;
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMat W = svd.matrixV() * svd.matrixU().adjoint();
    CMat Y0 = s0 * W.adjoint();

    double res2 = 0.0, res3 = 0.0, tmax = 0.0;
    std::vector<Complex> traces;
    std::vector<double> weights;
    for (const CMat& e : povm.elements) {
        const double wgt = ((rho0.rho + rho1.rho) * e).trace().real();
        weights.push_back(wgt);
        traces.push_back((W * s0 * e * s1).trace());
        tmax = std::max(tmax, std::abs(traces.back()));
        if (wgt < weight_floor) continue;
        // rank-1 fast path when the element is (numerically) a projector
        CMat eh = hermitian_sqrt(e);
        CMat X = eh * s1;
        CMat Y = eh * Y0;
        const Complex num = (Y.adjoint() * X).trace();
        const double den = std::max(Y.squaredNorm(), 1e-300);
        const Complex mu = num / den;
        const double r = (X - mu * Y).norm() / std::max(X.norm(), 1e-300);
        res2 = std::max(res2, r);
    }
    for (size_t i = 0; i < traces.size(); ++i) {
        if (weights[i] >= weight_floor && tmax > 0.0) {
            res3 = std::max(res3, std::abs(traces[i].imag()) / tmax);
        }
    }
    return {res2, res3};
}

std::pair<CMat, double> sld_fock(const CMat& rho, const CMat& drho) {
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    const Vec& w = es.eigenvalues();
    const double wmax = w.maxCoeff();
    CMat dr = es.eigenvectors().adjoint() * drho * es.eigenvectors();
    CMat L = CMat::Zero(rho.rows(), rho.cols());
    for (Eigen::Index a = 0; a < w.size(); ++a) {
        for (Eigen::Index b = 0; b < w.size(); ++b) {
            const double s = w(a) + w(b);
            if (s > kSupportTol * wmax) L(a, b) = 2.0 * dr(a, b) / s;
        }
    }
    CMat Lfull = es.eigenvectors() * L * es.eigenvectors().adjoint();
    const double qfi = (rho * Lfull * Lfull).trace().real();
    return {std::move(Lfull), qfi};
}

OraclePovm number_povm(int cutoff) {
    OraclePovm povm;
    povm.elements.reserve(cutoff);
    for (int n = 0; n < cutoff; ++n) {
        CMat e = CMat::Zero(cutoff, cutoff);
        e(n, n) = 1.0;
        povm.elements.push_back(std::move(e));
    }
    return povm;
}

OraclePovm homodyne_povm(double angle, double range, int cutoff, int bins) {
    // eigenvectors of cos(angle) x + sin(angle) p are e^{-i angle n} |x>
    CMat U = rotation_op(angle, cutoff);
    // 5-point Gauss-Legendre nodes/weights on [-1, 1]
    const std::array<double, 5> gx = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                      0.5384693101056831, 0.9061798459386640};
    const std::array<double, 5> gw = {0.2369268850561891, 0.4786286704993665,
                                      0.5688888888888889, 0.4786286704993665,
                                      0.2369268850561891};
    OraclePovm povm;
    povm.elements.reserve(bins + 1);
    CMat total = CMat::Zero(cutoff, cutoff);
    Vec psi(cutoff);
    const double width = 2.0 * range / bins;
    for (int b = 0; b < bins; ++b) {
        const double lo = -range + b * width;
        CMat e = CMat::Zero(cutoff, cutoff);
        for (int k = 0; k < 5; ++k) {
            const double x = lo + 0.5 * width * (1.0 + gx[k]);
            hermite_column(x, cutoff, psi);
            CVec col = U * psi.cast<Complex>();
            e += (0.5 * width * gw[k]) * col * col.adjoint();
        }
        total += e;
        povm.elements.push_back(std::move(e));
    }
    // tail element completes the identity (clipped to PSD)
    CMat tail = CMat::Identity(cutoff, cutoff) - total;
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (tail + tail.adjoint())));
    CVec d = es.eigenvalues().cwiseMax(0.0).cast<Complex>();
    povm.elements.push_back(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
    return povm;
}

OraclePovm projector_povm(const CMat& columns) {
    OraclePovm povm;
    povm.elements.reserve(columns.cols());
    for (Eigen::Index k = 0; k < columns.cols(); ++k) {
        povm.elements.push_back(columns.col(k) * columns.col(k).adjoint());
    }
    return povm;
}

CMat gaussian_m_operator_fock(const MOperatorForm& form, int cutoff) {
    CMat x = position_op(cutoff), pm = momentum_op(cutoff);
    auto disp_of = [&](const Vec& u) {
        return displacement_op(Complex(u(0), u(1)) / std::sqrt(2.0), cutoff);
    };
    CMat D1 = disp_of(form.u1);
    if (!form.uM) {
        CMat lin = form.vM(0) * x + form.vM(1) * pm;
        return D1 * matrix_exp(lin) * D1.adjoint();
    }
    std::array<CMat, 2> Q = {x, pm};
    CMat H = CMat::Zero(cutoff, cutoff);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) H += form.GM(j, k) * Q[j] * Q[k];
    }
    CMat DM = disp_of(*form.uM);
    CMat core = matrix_exp(CMat(-0.5 * H));
    return D1 * DM * core * DM.adjoint() * D1.adjoint();
}

CMat optimal_basis_fock(const MOperatorForm& form, int cutoff) {
    if (!form.uM) return CMat(cutoff, 0);
    Eigen::SelfAdjointEigenSolver<Mat> es(form.GM);
    const double d_lo = es.eigenvalues()(0), d_hi = es.eigenvalues()(1);
    const double prod = d_lo * d_hi;
    const double scale = std::max(d_lo * d_lo, d_hi * d_hi);
    if (std::abs(prod) <= 1e-10 * scale) return CMat(cutoff, 0);  // parabolic

    // symplectic normal form of GM (as in classify)
    Mat R = es.eigenvectors();
    if (R.determinant() < 0) R.col(0) *= -1.0;
    if (prod < 0.0 && (R.transpose() * form.GM * R)(0, 0) < 0.0) {
        Mat Rsw(2, 2);
        Rsw << 0.0, -1.0, 1.0, 0.0;
        R = R * Rsw;
    }
    Mat D2 = R.transpose() * form.GM * R;
    const double a = std::abs(D2(0, 0)), b = std::abs(D2(1, 1));
    const double s = std::pow(b / a, 0.25);
    Mat Sq(2, 2);
    Sq << s, 0.0, 0.0, 1.0 / s;
    Mat S = R * Sq;
    if (prod < 0.0) {
        Mat R4(2, 2);
        const double c = std::cos(M_PI / 4.0), sn = std::sin(M_PI / 4.0);
        R4 << c, -sn, sn, c;
        S = S * R4;
    }

    // Fock unitary with Heisenberg action U^dag Q U = S Q, via the SVD
    // S = R(a1) diag(sv1, sv2) R(a2); rot(t) realizes [[c,s],[-s,c]],
    // squeeze(rr) realizes diag(e^{-rr}, e^{rr}).
    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat Us = svd.matrixU();
    Mat Vs = svd.matrixV();
    Vec sv = svd.singularValues();
    if (Us.determinant() < 0) {
        Us.col(1) *= -1.0;
        sv(1) *= -1.0;
    }
    if (Vs.determinant() < 0) {
        Vs.col(1) *= -1.0;
        sv(1) *= -1.0;
    }
    // S = Us diag(sv) Vs^T; each orthogonal factor is [[c,s],[-s,c]] with
    // angle read from its first row
    const double a1 = std::atan2(Us(0, 1), Us(0, 0));
    const double a2 = std::atan2(Vs.transpose()(0, 1), Vs.transpose()(0, 0));
    if (sv(1) < 0.0) {
        // net reflection cannot occur for a symplectic S (det = +1)
        throw numerical_error("NumericalBreakdown", "optimal_basis_fock: reflection in SVD");
    }
    const double rr = -std::log(sv(0));
    CMat U = rotation_op(a1, cutoff) * squeeze_op(rr, cutoff) * rotation_op(a2, cutoff);

    Vec ut = form.u1 + *form.uM;
    CMat D = displacement_op(Complex(ut(0), ut(1)) / std::sqrt(2.0), cutoff);
    if (prod > 0.0) return CMat(D * U);  // displaced image of the number basis
    CMat xp = position_op(cutoff) * momentum_op(cutoff) +
              momentum_op(cutoff) * position_op(cutoff);
    Eigen::SelfAdjointEigenSolver<CMat> xpe(xp);
    return CMat(D * U * xpe.eigenvectors());
}

double povm_completeness_defect(const OraclePovm& povm) {
    if (povm.elements.empty()) return 1.0;
    CMat total = CMat::Zero(povm.elements[0].rows(), povm.elements[0].cols());
    for (const CMat& e : povm.elements) total += e;
    return (total - CMat::Identity(total.rows(), total.cols())).cwiseAbs().maxCoeff();
}

}  // namespace gqf
