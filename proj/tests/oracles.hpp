#pragma once

// Brute-force references and random-instance generators shared by the test
// binaries. Everything here is deliberately independent of the determinant /
// solver code paths it checks.

#include <array>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gaudin/model.hpp"
#include "gaudin/roots.hpp"

namespace gaudin::testing {

inline std::vector<double> random_epsilons(std::mt19937_64& rng, int n,
                                           double min_gap = 0.02) {
    std::uniform_real_distribution<double> dist(0.0, static_cast<double>(n));
    for (;;) {
        std::vector<double> eps(n);
        for (double& e : eps) e = dist(rng);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(eps[i] - eps[j]) < min_gap) {
                    ok = false;
                    break;
                }
        if (ok) return eps;
    }
}

inline std::array<double, 3> random_field(std::mt19937_64& rng,
                                          double b_perp_min = 0.1) {
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (;;) {
        const std::array<double, 3> b{dist(rng), dist(rng), dist(rng)};
        if (b[0] * b[0] + b[1] * b[1] >= b_perp_min * b_perp_min) return b;
    }
}

inline SpinSystem random_system(std::mt19937_64& rng, int n, double b_perp_min = 0.1) {
    return build_system(random_epsilons(rng, n), random_field(rng, b_perp_min));
}

inline std::vector<double> random_weights(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> w(n);
    for (double& x : w) x = dist(rng);
    return w;
}

inline Eigen::VectorXcd random_roots(std::mt19937_64& rng, int n, bool complex_parts) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::VectorXcd roots(n);
    for (int p = 0; p < n; ++p) {
        const double re = dist(rng) * 3.0;
        const double im = complex_parts ? dist(rng) : 0.0;
        roots[p] = Complex(re, im);
    }
    return roots;
}

// Sum over ordered selections of `slots` distinct elements from `pool`, of
// the product over k of 1/(pool[sel_k] - targets[k]). The permanent-style sum
// behind both scalar-product formulas.
inline Complex selection_sum(const std::vector<Complex>& pool,
                             const std::vector<double>& targets, std::vector<char>& used,
                             std::size_t slot) {
    if (slot == targets.size()) return Complex(1.0, 0.0);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        acc += selection_sum(pool, targets, used, slot + 1) /
               (pool[i] - targets[slot]);
        used[i] = 0;
    }
    return acc;
}

// <{mu}|{lambda}> as the explicit sum over Cauchy permanents: every way of
// assigning N of the 2N roots to the N levels, times (b_plus)^N.
inline Complex overlap_permanent_sum(const SpinSystem& sys,
                                     const Eigen::VectorXcd& roots_a,
                                     const Eigen::VectorXcd& roots_b) {
    std::vector<Complex> pool(roots_a.data(), roots_a.data() + roots_a.size());
    pool.insert(pool.end(), roots_b.data(), roots_b.data() + roots_b.size());
    std::vector<char> used(pool.size(), 0);
    const Complex b_plus = field_params(sys).b_plus;
    Complex prefactor = 1.0;
    for (int k = 0; k < sys.n; ++k) prefactor *= b_plus;
    return prefactor * selection_sum(pool, sys.epsilons, used, 0);
}

// <up_set|{lambda}> as the explicit permanent sum over M-subsets of the roots.
inline Complex projection_permanent_sum(const SpinSystem& sys,
                                        const Eigen::VectorXcd& roots,
                                        const std::vector<int>& up_set) {
    std::vector<Complex> pool(roots.data(), roots.data() + roots.size());
    std::vector<double> targets;
    for (const int site : up_set) targets.push_back(sys.epsilons[site]);
    std::vector<char> used(pool.size(), 0);
    const Complex b_plus = field_params(sys).b_plus;
    Complex prefactor = 1.0;
    for (std::size_t k = up_set.size(); k < static_cast<std::size_t>(sys.n); ++k)
        prefactor *= b_plus;
    return prefactor * selection_sum(pool, targets, used, 0);
}

// Greedy nearest-conjugate pairing; returns the worst |conj(lambda_p) -
// lambda_q| over the pairing. Real roots are their own partners.
inline double conjugation_closure_defect(const Eigen::VectorXcd& roots) {
    std::vector<Complex> pending(roots.data(), roots.data() + roots.size());
    double worst = 0.0;
    while (!pending.empty()) {
        const Complex z = pending.back();
        pending.pop_back();
        if (z.imag() == 0.0) continue;
        if (pending.empty()) {
            worst = std::max(worst, 2.0 * std::abs(z.imag()));
            break;
        }
        const Complex target = std::conj(z);
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const double d = std::abs(pending[i] - target);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        worst = std::max(worst, best_dist);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

} // namespace gaudin::testing
