#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaudin/bethe.hpp"
#include "gaudin/fock.hpp"
#include "oracles.hpp"

using namespace gaudin;
using gaudin::testing::random_system;
using gaudin::testing::random_weights;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

// Charge-vector matching distance between the analytic spectrum and ED.
double spectral_match_distance(const SpinSystem& sys, const SolverOptions& opts = {}) {
    const std::vector<double> weights(sys.n, 1.0);
    std::vector<Eigen::VectorXd> analytic;
    for (const BetheSolution& rotated : solve_all(sys, opts)) {
        const BetheSolution common = shift_frame(sys, rotated);
        analytic.push_back(charge_eigenvalues(sys, common));
    }
    std::vector<Eigen::VectorXd> reference;
    for (const EdState& state : ed_reference(sys, weights).states)
        reference.push_back(state.charges);
    return match_charge_vectors(analytic, reference).max_distance;
}

} // namespace

TEST_CASE("residuals of the single-spin quadratic equations") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});
    CHECK(residual_common(sys, vec1(1.0))[0] == 0.0);
    CHECK(residual_common(sys, vec1(0.0))[0] == -1.0);
    CHECK(residual_rotated(sys, vec1(0.0))[0] == 0.0);
    CHECK(residual_rotated(sys, vec1(-2.0))[0] == 0.0);
}

TEST_CASE("rotated equations reduce to common ones for an axial field") {
    std::mt19937_64 rng(3);
    const SpinSystem sys = build_system({0.0, 0.7, 1.9}, {0.0, 0.0, 1.3});
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd lam(3);
        lam << dist(rng), dist(rng), dist(rng);
        CHECK((residual_rotated(sys, lam) - residual_common(sys, lam)).norm() == 0.0);
    }
}

TEST_CASE("shift consistency between the frames") {
    std::mt19937_64 rng(5);
    const SpinSystem sys = random_system(rng, 4);
    const FieldParams fp = field_params(sys);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd rotated(4);
        for (int i = 0; i < 4; ++i) rotated[i] = dist(rng);
        Eigen::VectorXd common = rotated.array() + (fp.b_mag - fp.b_z);
        CHECK((residual_rotated(sys, rotated) - residual_common(sys, common))
                  .lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("newton_refine on the single-spin equation") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});
    const BetheSolution sol = newton_refine(sys, Frame::common, vec1(0.9));
    CHECK(std::abs(sol.lambdas[0] - 1.0) < 1e-12);
    CHECK(sol.residual < 1e-12);

    // An exact solution is a fixed point.
    const BetheSolution fixed = newton_refine(sys, Frame::common, vec1(1.0));
    CHECK(fixed.lambdas[0] == 1.0);

    CHECK_THROWS_AS(newton_refine(sys, Frame::common,
                                  vec1(std::numeric_limits<double>::quiet_NaN())),
                    Error);
}

TEST_CASE("solve_all on a single spin") {
    for (const std::array<double, 3> field :
         {std::array<double, 3>{0.0, 0.0, 1.0}, std::array<double, 3>{1.0, 0.0, 0.0}}) {
        const SpinSystem sys = build_system({0.0}, field);
        const std::vector<BetheSolution> sols = solve_all(sys);
        REQUIRE(sols.size() == 2);
        CHECK(sols[0].label == 0);
        CHECK(sols[1].label == 1);
        CHECK(std::abs(sols[0].lambdas[0] - 0.0) < 1e-12);
        CHECK(std::abs(sols[1].lambdas[0] + 2.0) < 1e-12);
        CHECK(sols[0].frame == Frame::rotated);
    }
}

TEST_CASE("solve_all rejects a vanishing field") {
    const SpinSystem sys = build_system({0.0, 1.0}, {0.0, 0.0, 0.0});
    CHECK_THROWS_WITH_AS(solve_all(sys), doctest::Contains("zero_field"), Error);
}

TEST_CASE("shift_frame on a single in-plane spin") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});
    const std::vector<BetheSolution> sols = solve_all(sys);
    const BetheSolution ground = shift_frame(sys, sols[0]);
    const BetheSolution excited = shift_frame(sys, sols[1]);
    CHECK(ground.frame == Frame::common);
    CHECK(std::abs(ground.lambdas[0] - 1.0) < 1e-12);
    CHECK(std::abs(excited.lambdas[0] + 1.0) < 1e-12);
    CHECK(ground.residual < 1e-12);
    CHECK(excited.residual < 1e-12);
}

TEST_CASE("axial field makes the shift a no-op") {
    const SpinSystem sys = build_system({0.0, 1.0}, {0.0, 0.0, 1.0});
    BetheSolution sol;
    sol.frame = Frame::rotated;
    sol.lambdas = Eigen::VectorXd::Zero(2);
    sol.lambdas << 0.3, -0.7;
    const BetheSolution shifted = shift_frame(sys, sol);
    CHECK(shifted.lambdas == sol.lambdas);
}

TEST_CASE("frame shift round-trips") {
    std::mt19937_64 rng(17);
    const SpinSystem sys = random_system(rng, 4);
    for (const BetheSolution& sol : solve_all(sys)) {
        const BetheSolution back = shift_frame(sys, shift_frame(sys, sol));
        CHECK(back.frame == sol.frame);
        CHECK((back.lambdas - sol.lambdas).lpNorm<Eigen::Infinity>() < 1e-14);
    }
}

TEST_CASE("charge_eigenvalues closed forms for one spin") {
    const SpinSystem sys = build_system({0.0}, {1.0, 0.0, 0.0});
    BetheSolution sol;
    sol.frame = Frame::common;
    sol.lambdas = vec1(1.0);
    CHECK(charge_eigenvalues(sys, sol)[0] == doctest::Approx(-0.5).epsilon(1e-14));
    sol.lambdas = vec1(-1.0);
    CHECK(charge_eigenvalues(sys, sol)[0] == doctest::Approx(0.5).epsilon(1e-14));

    const SpinSystem axial = build_system({0.0}, {0.0, 0.0, 1.0});
    sol.lambdas = vec1(0.0);
    CHECK(charge_eigenvalues(axial, sol)[0] == doctest::Approx(-0.5).epsilon(1e-14));

    sol.frame = Frame::rotated;
    CHECK_THROWS_WITH_AS(charge_eigenvalues(sys, sol), doctest::Contains("wrong_frame"),
                         Error);
}

TEST_CASE("two-spin charges match exact diagonalization") {
    const SpinSystem sys = build_system({0.0, 1.0}, {0.3, 0.4, 0.5});
    const std::vector<double> weights{1.0, 1.0};
    const EdSpectrum spectrum = ed_reference(sys, weights);

    std::vector<Eigen::VectorXd> analytic;
    for (const BetheSolution& rotated : solve_all(sys))
        analytic.push_back(charge_eigenvalues(sys, shift_frame(sys, rotated)));
    std::vector<Eigen::VectorXd> reference;
    for (const EdState& state : spectrum.states) reference.push_back(state.charges);

    CHECK(match_charge_vectors(analytic, reference).max_distance < 1e-8);
}

TEST_CASE("three-spin tilted-field spectrum is complete") {
    const SpinSystem sys = build_system({0.0, 1.0, 2.3}, {0.3, 0.4, 0.5});
    CHECK(spectral_match_distance(sys) < 1e-8);
}

TEST_CASE("random systems: completeness, reality, residuals, sum rule") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const SpinSystem sys = random_system(rng, 5);
        const FieldParams fp = field_params(sys);
        const std::vector<BetheSolution> sols = solve_all(sys);
        REQUIRE(sols.size() == 32);

        for (const BetheSolution& sol : sols) {
            CHECK(sol.lambdas.allFinite());
            CHECK(sol.residual < 1e-12);
            const BetheSolution common = shift_frame(sys, sol);
            CHECK(residual_common(sys, common.lambdas).lpNorm<Eigen::Infinity>() <
                  1e-10);
            // Total charge is |B| m with m half-integer.
            const double m = charge_eigenvalues(sys, common).sum() / fp.b_mag;
            CHECK(std::abs(m - std::round(2.0 * m) / 2.0) < 1e-8);
        }
        CHECK(spectral_match_distance(sys) < 1e-8);
    }
}
