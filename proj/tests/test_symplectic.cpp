// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gqf/errors.hpp"
#include "gqf/symplectic.hpp"
#include "test_util.hpp"

using namespace gqf;

namespace {
double acoth(double x) { return std::atanh(1.0 / x); }
}  // namespace

TEST_CASE("symplectic form blocks and algebra") {
    for (int n : {1, 2, 3}) {
        Mat om = omega_matrix(n);
        CHECK((om + om.transpose()).norm() == 0.0);
        CHECK((om * om + Mat::Identity(2 * n, 2 * n)).norm() == 0.0);
    }
}

TEST_CASE("thermal Gibbs matrix") {
    // nbar = 1: G = 2 acoth(3) * I
    Mat V = 1.5 * Mat::Identity(2, 2);
    GibbsForm g = gibbs_from_covariance(V, 0.0);
    CHECK(g.G(0, 0) == doctest::Approx(2.0 * acoth(3.0)).epsilon(1e-14));
    CHECK(g.G(1, 1) == doctest::Approx(2.0 * acoth(3.0)).epsilon(1e-14));
    CHECK(std::abs(g.G(0, 1)) < 1e-15);
    CHECK(g.epsilon_used == 0.0);
}

TEST_CASE("squeezed thermal Gibbs matrix") {
    // V = nu diag(e^{-2r}, e^{2r})  ->  G = g diag(e^{2r}, e^{-2r})
    const double r = 0.5, nu = 1.5, g0 = 2.0 * acoth(3.0);
    Mat V(2, 2);
    V << nu * std::exp(-2.0 * r), 0.0, 0.0, nu * std::exp(2.0 * r);
    GibbsForm g = gibbs_from_covariance(V, 0.0);
    CHECK(g.G(0, 0) == doctest::Approx(g0 * std::exp(2.0 * r)).epsilon(1e-13));
    CHECK(g.G(1, 1) == doctest::Approx(g0 * std::exp(-2.0 * r)).epsilon(1e-13));
}

TEST_CASE("vacuum requires regularization") {
    Mat V = 0.5 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(gibbs_from_covariance(V, 0.0), Error);
    GibbsForm g = gibbs_from_covariance(V, 1e-6);
    CHECK(g.G(0, 0) == doctest::Approx(2.0 * acoth(1.0 + 2e-6)).epsilon(1e-12));
    CHECK(g.epsilon_used == 1e-6);
}

TEST_CASE("covariance_from_gibbs inverts the thermal example") {
    Mat G = 2.0 * acoth(3.0) * Mat::Identity(2, 2);
    Mat V = covariance_from_gibbs(GibbsForm{1, G, Vec::Zero(2), 0.0});
    CHECK((V - 1.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Eq.(10) squeezed-thermal Gibbs inverts to the covariance") {
    const double nbar = 0.7, r = 0.35;
    const double g0 = 2.0 * acoth(2.0 * nbar + 1.0);
    Mat G(2, 2);
    G << g0 * std::exp(2.0 * r), 0.0, 0.0, g0 * std::exp(-2.0 * r);
    Mat V = covariance_from_gibbs(GibbsForm{1, G, Vec::Zero(2), 0.0});
    const double nu = nbar + 0.5;
    CHECK(V(0, 0) == doctest::Approx(nu * std::exp(-2.0 * r)).epsilon(1e-12));
    CHECK(V(1, 1) == doctest::Approx(nu * std::exp(2.0 * r)).epsilon(1e-12));
}

TEST_CASE("round trip on random physical covariances") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 2;
        GaussianState s = testutil::random_state(n, rng);
        GibbsForm g = gibbs_from_covariance(s.cov, 0.0);
        Mat back = covariance_from_gibbs(g);
        CHECK((back - s.cov).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("clamped round trip matches the clamped spectrum") {
    // symplectic eigenvalues of the round trip equal max(nu, 1/2 + eps)
    std::mt19937_64 rng(7);
    const double eps = 1e-3;
    Mat S = testutil::random_symplectic(1, rng);
    Mat V = S * (0.5 * Mat::Identity(2, 2)) * S.transpose();  // pure squeezed
    GibbsForm g = gibbs_from_covariance(V, eps);
    auto nu = symplectic_eigenvalues(covariance_from_gibbs(g));
    CHECK(nu[0] == doctest::Approx(0.5 + eps).epsilon(1e-9));
}

TEST_CASE("Cayley identity e^{i Om G} = (W-1)(W+1)^{-1}") {
    std::mt19937_64 rng(3);
    GaussianState s = testutil::random_state(2, rng);
    GibbsForm g = gibbs_from_covariance(s.cov, 0.0);
    CMat lhs = gibbs_phase_matrix(g.G);
    const Mat om = omega_matrix(2);
    CMat W = -2.0 * s.cov.cast<Complex>() * (Complex(0, 1) * om);
    CMat I = CMat::Identity(4, 4);
    CMat rhs = (W - I) * (W + I).inverse();
    CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
}

TEST_CASE("degenerate Gibbs matrix is rejected") {
    Mat G(2, 2);
    G << 1.0, 0.0, 0.0, 0.0;  // i Om G has a zero eigenvalue
    CHECK_THROWS_AS(covariance_from_gibbs(GibbsForm{1, G, Vec::Zero(2), 0.0}), Error);
}

TEST_CASE("williamson of the vacuum") {
    auto wd = williamson(Mat(0.5 * Mat::Identity(2, 2)));
    CHECK(wd.nu[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK((wd.S * wd.S.transpose() - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("williamson of a pure squeezed diagonal") {
    Mat V(2, 2);
    V << 2.0, 0.0, 0.0, 0.125;
    auto wd = williamson(V);
    CHECK(wd.nu[0] == doctest::Approx(0.5).epsilon(1e-12));
    Mat D = Vec(Vec::Constant(2, wd.nu[0])).asDiagonal();
    CHECK((wd.S * D * wd.S.transpose() - V).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("williamson reconstruction and symplecticity on random inputs") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 8; ++trial) {
        GaussianState s = testutil::random_state(2, rng);
        auto wd = williamson(s.cov);
        Vec d(4);
        d << wd.nu[0], wd.nu[0], wd.nu[1], wd.nu[1];
        CHECK((wd.S * d.asDiagonal() * wd.S.transpose() - s.cov).cwiseAbs().maxCoeff() < 1e-9);
        const Mat om = omega_matrix(2);
        CHECK((wd.S * om * wd.S.transpose() - om).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(wd.nu[0] >= wd.nu[1]);
    }
}

TEST_CASE("williamson rejects indefinite input") {
    Mat V(2, 2);
    V << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(williamson(V), Error);
}

TEST_CASE("state builder special cases") {
    GaussianState vac = state_builder(0.0, 0.0, 0.0, 0.0);
    CHECK((vac.cov - 0.5 * Mat::Identity(2, 2)).norm() < 1e-15);
    CHECK(vac.mean.norm() == 0.0);

    GaussianState th = state_builder(1.0, 0.0, 0.0, 0.0);
    CHECK((th.cov - 1.5 * Mat::Identity(2, 2)).norm() < 1e-15);

    const double r = 0.4;
    GaussianState sq = state_builder(0.0, r, 0.0, 0.0);
    CHECK(sq.cov(0, 0) == doctest::Approx(0.5 * std::exp(-2.0 * r)).epsilon(1e-14));
    CHECK(sq.cov(1, 1) == doctest::Approx(0.5 * std::exp(2.0 * r)).epsilon(1e-14));

    GaussianState coh = state_builder(0.0, 0.0, 0.0, Complex(0.3, -0.2));
    CHECK(coh.mean(0) == doctest::Approx(std::sqrt(2.0) * 0.3).epsilon(1e-15));
    CHECK(coh.mean(1) == doctest::Approx(-std::sqrt(2.0) * 0.2).epsilon(1e-15));
}

TEST_CASE("unphysical covariance is rejected") {
    Mat V = 0.3 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(GaussianState(Vec::Zero(2), V), Error);
}

TEST_CASE("gaussian unitary action, composition, inverse") {
    std::mt19937_64 rng(23);
    GaussianState s = testutil::random_state(1, rng);
    Mat S = testutil::random_symplectic(1, rng);
    Vec d(2);
    d << 0.3, -0.7;
    GaussianUnitary u{S, d};
    GaussianState t = u.apply(s);
    CHECK((t.mean - (S * s.mean + d)).norm() < 1e-14);
    CHECK((t.cov - S * s.cov * S.transpose()).norm() < 1e-13);
    GaussianState back = u.inverse().apply(t);
    CHECK((back.mean - s.mean).norm() < 1e-12);
    CHECK((back.cov - s.cov).cwiseAbs().maxCoeff() < 1e-12);
    GaussianUnitary id = u.inverse().compose(u);
    CHECK((id.S - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK(id.d.norm() < 1e-12);
}
