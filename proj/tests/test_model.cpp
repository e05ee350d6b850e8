#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaudin/model.hpp"
#include "oracles.hpp"

using namespace gaudin;

TEST_CASE("build_system validates input") {
    const SpinSystem two = build_system({0.0, 1.0}, {0.0, 0.0, 1.0});
    CHECK(two.n == 2);
    CHECK(two.dim() == 4);

    const SpinSystem four = build_system({0.0, 1.0, 2.3, 3.1}, {0.3, 0.4, 0.5});
    CHECK(four.n == 4);

    CHECK_THROWS_WITH_AS(build_system({0.0, 0.0}, {0.0, 0.0, 1.0}),
                         doctest::Contains("duplicate_epsilon"), Error);
    CHECK_THROWS_WITH_AS(build_system({}, {0.0, 0.0, 1.0}),
                         doctest::Contains("empty_system"), Error);
    CHECK_THROWS_AS(build_system({0.0, 1e-12}, {1.0, 0.0, 0.0}), Error);
}

TEST_CASE("build_system honors a custom gap tolerance") {
    CHECK_NOTHROW(build_system({0.0, 1e-6}, {1.0, 0.0, 0.0}, 1e-9));
    CHECK_THROWS_AS(build_system({0.0, 1e-6}, {1.0, 0.0, 0.0}, 1e-3), Error);
}

TEST_CASE("field_params derived constants") {
    const SpinSystem sx = build_system({0.0}, {1.0, 0.0, 0.0});
    FieldParams fp = field_params(sx);
    CHECK(fp.b_plus == Complex(1.0, 0.0));
    CHECK(fp.b_perp_sq == 1.0);
    CHECK(fp.b_mag == 1.0);

    const SpinSystem sz = build_system({0.0}, {0.0, 0.0, 1.0});
    fp = field_params(sz);
    CHECK(fp.b_plus == Complex(0.0, 0.0));
    CHECK(fp.b_perp_sq == 0.0);
    CHECK(fp.b_mag == 1.0);

    const SpinSystem tilted = build_system({0.0}, {0.3, 0.4, 0.5});
    fp = field_params(tilted);
    CHECK(fp.b_perp_sq == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(fp.b_mag == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("field_params invariants on random fields") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const SpinSystem sys =
            build_system({0.0}, {dist(rng), dist(rng), dist(rng)});
        const FieldParams fp = field_params(sys);
        CHECK(fp.b_plus == std::conj(fp.b_minus));
        CHECK(std::abs(std::norm(fp.b_plus) - fp.b_perp_sq) <= 1e-15 * (1.0 + fp.b_perp_sq));
        CHECK(std::abs(fp.b_mag * fp.b_mag - fp.b_z * fp.b_z - fp.b_perp_sq) <=
              1e-14 * (1.0 + fp.b_mag * fp.b_mag));
    }
}
