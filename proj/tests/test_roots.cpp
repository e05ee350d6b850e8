#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gaudin/bethe.hpp"
#include "gaudin/roots.hpp"
#include "oracles.hpp"

using namespace gaudin;
using gaudin::testing::conjugation_closure_defect;
using gaudin::testing::random_roots;
using gaudin::testing::random_system;

namespace {

RootSet on_shell_roots(const SpinSystem& sys, const BetheSolution& rotated) {
    return roots_from_lambdas(sys, shift_frame(sys, rotated).lambdas);
}

} // namespace

TEST_CASE("single-spin inversions") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});

    Eigen::VectorXd lam(1);
    lam << 2.0;
    CHECK(std::abs(roots_from_lambdas(sys, lam).roots[0] - Complex(-0.5, 0.0)) < 1e-14);

    lam << 1.0; // on-shell
    CHECK(std::abs(roots_from_lambdas(sys, lam).roots[0] - Complex(-1.0, 0.0)) < 1e-14);
    lam << -1.0;
    CHECK(std::abs(roots_from_lambdas(sys, lam).roots[0] - Complex(1.0, 0.0)) < 1e-14);

    RootSet rs;
    rs.roots.resize(1);
    rs.roots[0] = Complex(-1.0, 0.0);
    CHECK(std::abs(lambdas_from_roots(sys, rs)[0] - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("roots at infinity are reported as singular") {
    const SpinSystem sys = build_system({0.0}, {0.0, 0.0, 1.0});
    Eigen::VectorXd lam(1);
    lam << 0.0; // the axial-field ground state: its root escaped to infinity
    CHECK_THROWS_WITH_AS(roots_from_lambdas(sys, lam),
                         doctest::Contains("singular_conversion"), Error);
}

TEST_CASE("conjugate pairs give real Lambdas") {
    const SpinSystem sys = build_system({0.0, 1.0, 2.0}, {0.4, 0.0, 0.8});
    RootSet rs;
    rs.roots.resize(3);
    rs.roots << Complex(0.5, 1.25), Complex(0.5, -1.25), Complex(-2.0, 0.0);
    const Eigen::VectorXcd lam = lambdas_from_roots(sys, rs);
    CHECK(lam.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random complex roots round-trip through the Lambda variables") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const SpinSystem sys = random_system(rng, 4);
        RootSet rs;
        rs.roots = random_roots(rng, 4, true);
        bool collides = false;
        for (int p = 0; p < 4 && !collides; ++p)
            for (int i = 0; i < 4; ++i)
                if (std::abs(rs.roots[p] - sys.epsilons[i]) < 1e-3) {
                    collides = true;
                    break;
                }
        if (collides) continue;

        const Eigen::VectorXcd lam = lambdas_from_roots(sys, rs);
        const RootSet back = roots_from_lambdas(sys, lam);
        const Eigen::VectorXcd lam_back = lambdas_from_roots(sys, back);
        CHECK((lam_back - lam).cwiseAbs().maxCoeff() <
              1e-8 * (1.0 + lam.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("on-shell solutions produce conjugation-closed roots") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 3; ++trial) {
        const SpinSystem sys = random_system(rng, 4);
        for (const BetheSolution& rotated : solve_all(sys)) {
            const RootSet rs = on_shell_roots(sys, rotated);
            CHECK(conjugation_closure_defect(rs.roots) < 1e-7);
        }
    }
}

TEST_CASE("gamma residuals on a single spin") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});
    RootSet rs;
    rs.roots.resize(1);

    rs.roots[0] = Complex(1.0, 0.0); // on-shell: Gamma = 1/2, product term = -1/2
    CHECK(std::abs(gamma_residuals(sys, rs)[0]) < 1e-14);

    rs.roots[0] = Complex(1.1, 0.0);
    const Complex off = gamma_residuals(sys, rs)[0];
    CHECK(off.real() == doctest::Approx(0.5 / 1.1 - 0.55).epsilon(1e-12));
    CHECK(std::abs(off) > 0.01);
}

TEST_CASE("gamma residuals vanish exactly on solver output") {
    std::mt19937_64 rng(107);
    const SpinSystem sys = random_system(rng, 4);
    for (const BetheSolution& rotated : solve_all(sys)) {
        const RootSet rs = on_shell_roots(sys, rotated);
        CHECK(gamma_residuals(sys, rs).cwiseAbs().maxCoeff() < 1e-7);

        RootSet perturbed = rs;
        perturbed.roots.array() += Complex(0.1, 0.0);
        bool valid = true;
        Eigen::VectorXcd res;
        try {
            res = gamma_residuals(sys, perturbed);
        } catch (const Error&) {
            valid = false; // shifted root may hit a level; skip those
        }
        if (valid) CHECK(res.cwiseAbs().maxCoeff() > 1e-4);
    }
}

TEST_CASE("gamma residual preconditions") {
    const SpinSystem sys = build_system({0.0, 1.0}, {1.0, 0.0, 0.0});
    RootSet rs;
    rs.roots.resize(2);
    rs.roots << Complex(3.0, 0.0), Complex(3.0, 0.0);
    CHECK_THROWS_WITH_AS(gamma_residuals(sys, rs), doctest::Contains("coincident_roots"),
                         Error);
    rs.roots << Complex(3.0, 0.0), Complex(1.0, 0.0);
    CHECK_THROWS_WITH_AS(gamma_residuals(sys, rs),
                         doctest::Contains("spectral_collision"), Error);
}

TEST_CASE("lagrange unit sum, hand-checked instance") {
    const std::vector<double> eps{0.0, 1.0};
    RootSet rs;
    rs.roots.resize(2);
    rs.roots << Complex(2.0, 0.0), Complex(3.0, 0.0);
    // Terms: (1-2)/(3-2) = -1 and (1-3)/(2-3) = 2.
    const Complex sum = lagrange_unit_sum(eps, rs, 0);
    CHECK(std::abs(sum - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("lagrange unit sum is 1 for arbitrary sets") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const std::vector<double> eps = gaudin::testing::random_epsilons(rng, n);
        RootSet rs;
        rs.roots = random_roots(rng, n, trial % 2 == 1);
        bool skip = false;
        for (int p = 0; p < n && !skip; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::abs(rs.roots[p] - rs.roots[q]) < 1e-3) skip = true;
        if (skip) continue;
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(lagrange_unit_sum(eps, rs, i) - Complex(1.0, 0.0)) < 1e-9);
    }
}

TEST_CASE("zero-sum identity holds on-shell and fails off-shell") {
    std::mt19937_64 rng(113);
    const SpinSystem sys = random_system(rng, 4);
    const std::vector<BetheSolution> sols = solve_all(sys);

    for (const BetheSolution& rotated : sols) {
        const RootSet rs = on_shell_roots(sys, rotated);
        for (int a = 0; a < sys.n; ++a)
            for (int b = a + 1; b < sys.n; ++b) {
                const std::vector<int> subset{a, b};
                CHECK(std::abs(zero_sum_identity(sys, rs, subset)) < 1e-7);
            }
        const std::vector<int> triple{0, 1, 2};
        CHECK(std::abs(zero_sum_identity(sys, rs, triple)) < 1e-7);
    }

    RootSet off;
    off.roots = random_roots(rng, 4, true);
    const std::vector<int> pair{0, 1};
    CHECK(std::abs(zero_sum_identity(sys, off, pair)) > 1e-4);

    const RootSet rs = on_shell_roots(sys, sols[0]);
    const std::vector<int> single{0};
    CHECK_THROWS_AS(zero_sum_identity(sys, rs, single), Error);
}
