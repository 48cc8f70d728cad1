// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gqf/errors.hpp"
#include "gqf/fidelity.hpp"
#include "gqf/fock.hpp"
#include "test_util.hpp"

using namespace gqf;

namespace {

// closed form for two thermal states
double thermal_fidelity(double n0, double n1) {
    const double s = std::sqrt((n0 + 1.0) * (n1 + 1.0)) - std::sqrt(n0 * n1);
    return 1.0 / (s * s);
}

}  // namespace

TEST_CASE("identical states have unit fidelity") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        GaussianState s = testutil::random_state(1 + trial % 2, rng);
        FidelityResult f = fidelity_gaussian(s, s);
        CHECK(f.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    }
    // identical pure states (regularized on both sides)
    GaussianState coh = state_builder(0.0, 0.3, 0.0, Complex(0.4, 0.1));
    CHECK(fidelity_gaussian(coh, coh).fidelity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two thermal states match the closed form") {
    GaussianState s0 = state_builder(1.0, 0.0, 0.0, 0.0);
    GaussianState s1 = state_builder(0.5, 0.0, 0.0, 0.0);
    FidelityResult f = fidelity_gaussian(s0, s1);
    CHECK(f.fidelity == doctest::Approx(thermal_fidelity(1.0, 0.5)).epsilon(1e-12));
    CHECK(f.overlap == doctest::Approx(1.0 / 2.5).epsilon(1e-12));
}

TEST_CASE("coherent states: F = e^{-|alpha-beta|^2}") {
    GaussianState s0 = state_builder(0.0, 0.0, 0.0, 0.0);
    GaussianState s1 = state_builder(0.0, 0.0, 0.0, 1.0);
    // the eps-clamped value approaches e^{-1} at O(eps); verify against the
    // equally regularized oracle at matched nbar = eps
    FidelityResult f = fidelity_gaussian(s0, s1, 1e-7);
    CHECK(f.fidelity == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    auto f0 = build_state(1e-7, 0.0, 0.0, 0.0, 40);
    auto f1 = build_state(1e-7, 0.0, 0.0, 1.0, 40);
    CHECK(std::abs(f.fidelity - fidelity_fock(f0, f1)) < 1e-9);
}

TEST_CASE("thermal vs vacuum approaches 1/2 as the clamp shrinks") {
    GaussianState s0 = state_builder(1.0, 0.0, 0.0, 0.0);
    GaussianState s1 = state_builder(0.0, 0.0, 0.0, 0.0);
    double prev_err = 1.0;
    for (double eps : {1e-6, 1e-8, 1e-10}) {
        const double f = fidelity_gaussian(s0, s1, eps).fidelity;
        const double err = std::abs(f - 0.5);
        CHECK(err < prev_err);       // O(sqrt(eps)) regularization error
        CHECK(err < 3.0 * std::sqrt(eps));
        prev_err = err;
    }
    // and the eps-matched oracle agrees tightly
    const double eps = 1e-6;
    auto f0 = build_state(1.0, 0.0, 0.0, 0.0, 60);
    auto f1 = build_state(eps, 0.0, 0.0, 0.0, 60);
    CHECK(std::abs(fidelity_gaussian(s0, s1, eps).fidelity - fidelity_fock(f0, f1)) < 1e-9);
}

TEST_CASE("fidelity agrees with the Fock oracle on mixed pairs") {
    struct Case {
        double n0, r0, t0, a0, n1, r1, t1, a1;
    };
    for (const Case& c : {Case{0.5, 0.3, 0.0, 0.5, 1.0, 0.0, 0.7, 0.2},
                          Case{0.1, 0.8, 1.1, 1.0, 2.0, 0.3, -0.4, 0.3}}) {
        GaussianState s0 = state_builder(c.n0, c.r0, c.t0, c.a0);
        GaussianState s1 = state_builder(c.n1, c.r1, c.t1, c.a1);
        const int N = recommended_cutoff(std::max(c.n0, c.n1), std::max(c.r0, c.r1),
                                         std::max(c.a0, c.a1), 1e-9, 60);
        auto f0 = build_state(c.n0, c.r0, c.t0, c.a0, N);
        auto f1 = build_state(c.n1, c.r1, c.t1, c.a1, N);
        CHECK(std::abs(fidelity_gaussian(s0, s1).fidelity - fidelity_fock(f0, f1)) < 1e-8);
    }
}

TEST_CASE("fidelity is symmetric") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 2;
        GaussianState s0 = testutil::random_state(n, rng);
        GaussianState s1 = testutil::random_state(n, rng);
        CHECK(std::abs(fidelity_gaussian(s0, s1).fidelity -
                       fidelity_gaussian(s1, s0).fidelity) < 1e-9);
    }
}

TEST_CASE("fidelity is invariant under a shared Gaussian unitary") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 1 + trial % 2;
        GaussianState s0 = testutil::random_state(n, rng);
        GaussianState s1 = testutil::random_state(n, rng);
        Mat S = testutil::random_symplectic(n, rng);
        Vec d = Vec::Random(2 * n);
        GaussianUnitary u{S, d};
        CHECK(std::abs(fidelity_gaussian(s0, s1).fidelity -
                       fidelity_gaussian(u.apply(s0), u.apply(s1)).fidelity) < 1e-9);
    }
}

TEST_CASE("fidelity upper-bounds the overlap factor structure") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        GaussianState s0 = testutil::random_state(1, rng);
        GaussianState s1 = testutil::random_state(1, rng);
        FidelityResult f = fidelity_gaussian(s0, s1);
        CHECK(f.fidelity >= f.overlap - 1e-9);
        CHECK(f.fidelity <= 1.0 + 1e-9);
    }
}

TEST_CASE("commuting Gibbs matrices add in G_K") {
    const double g = 0.7;
    Mat G = g * Mat::Identity(2, 2);
    Mat GK = gk_matrix(G, G);
    CHECK((GK - 2.0 * g * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    auto spec = gk_spectrum(G, G);
    CHECK(spec[0] == doctest::Approx(2.0 * g).epsilon(1e-12));
}

TEST_CASE("gk_matrix reconstructs the phase-matrix product") {
    GaussianState s0 = state_builder(1.0, 0.0, 0.0, 0.0);
    GaussianState s1 = state_builder(0.5, 0.0, 0.0, 0.0);
    GibbsForm g0 = gibbs_from_state(s0, 0.0);
    GibbsForm g1 = gibbs_from_state(s1, 0.0);
    Mat GK = gk_matrix(g0.G, g1.G);
    CMat lhs = gibbs_phase_matrix(GK);
    CMat e1h = gibbs_phase_matrix(Mat(0.5 * g1.G));
    CMat rhs = e1h * gibbs_phase_matrix(g0.G) * e1h;
    CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());
}

TEST_CASE("gk spectrum for a squeezed-thermal/thermal pair via matrix route") {
    GaussianState s0 = state_builder(0.8, 0.4, 0.3, 0.0);
    GaussianState s1 = state_builder(0.5, 0.0, 0.0, 0.0);
    GibbsForm g0 = gibbs_from_state(s0, 0.0);
    GibbsForm g1 = gibbs_from_state(s1, 0.0);
    auto fast = gk_spectrum(g0.G, g1.G);
    auto slow = gibbs_symplectic_spectrum(gk_matrix(g0.G, g1.G));
    CHECK(std::abs(fast[0] - slow[0]) < 1e-9);
}

TEST_CASE("discrete Bhattacharyya basics") {
    std::vector<double> p = {0.25, 0.25, 0.5};
    CHECK(bhattacharyya(p, p) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> q = {0.5, 0.5, 0.0};
    std::vector<double> r = {0.0, 0.0, 1.0};
    CHECK(bhattacharyya(q, r) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bhattacharyya(p, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(bhattacharyya(p, {0.2, 0.2, 0.2}), Error);
}

TEST_CASE("sampled Bhattacharyya of two offset Gaussians") {
    // analytic: BC = exp(-d^2/(4 sigma^2)) for equal-width Gaussians, squared
    // convention gives BC^2... our definition squares the integral:
    // (int sqrt(p q))^2 = exp(-d^2/(4 s^2))
    const double s = 1.0, d = 0.8;
    std::vector<double> xs, p0, p1;
    for (int i = 0; i < 4001; ++i) {
        const double x = -12.0 + 24.0 * i / 4000.0;
        xs.push_back(x);
        p0.push_back(std::exp(-x * x / (2 * s * s)) / std::sqrt(2 * M_PI * s * s));
        p1.push_back(std::exp(-(x - d) * (x - d) / (2 * s * s)) / std::sqrt(2 * M_PI * s * s));
    }
    CHECK(bhattacharyya_sampled(xs, p0, p1) ==
          doctest::Approx(std::exp(-d * d / (4 * s * s))).epsilon(1e-9));
}

TEST_CASE("number-basis BC of thermal pairs converges to the fidelity") {
    // thermal states are diagonal, so number counting is optimal for them
    GaussianState s0 = state_builder(1.0, 0.0, 0.0, 0.0);
    GaussianState s1 = state_builder(0.5, 0.0, 0.0, 0.0);
    const double F = fidelity_gaussian(s0, s1).fidelity;
    double prev = 1.0;
    for (int N : {10, 20, 40}) {
        auto f0 = build_state(1.0, 0.0, 0.0, 0.0, N);
        auto f1 = build_state(0.5, 0.0, 0.0, 0.0, N);
        const double bc = bc_under_povm(f0, f1, number_povm(N));
        CHECK(bc >= F - 1e-4);
        CHECK(std::abs(bc - F) <= prev + 1e-12);
        prev = std::abs(bc - F);
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("any other measurement lower-bounds at the fidelity") {
    GaussianState s0 = state_builder(0.7, 0.2, 0.0, 0.4);
    GaussianState s1 = state_builder(0.4, 0.0, 0.0, 0.1);
    const double F = fidelity_gaussian(s0, s1).fidelity;
    const int N = 60;
    auto f0 = build_state(0.7, 0.2, 0.0, 0.4, N);
    auto f1 = build_state(0.4, 0.0, 0.0, 0.1, N);
    CHECK(bc_under_povm(f0, f1, number_povm(N)) >= F - 1e-6);
    CHECK(bc_under_povm(f0, f1, homodyne_povm(0.0, 10.0, N)) >= F - 1e-6);
    CHECK(bc_under_povm(f0, f1, homodyne_povm(M_PI / 2, 10.0, N)) >= F - 1e-6);
}
