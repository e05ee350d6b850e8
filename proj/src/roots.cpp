#include "gaudin/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gaudin {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kRoundTripTol = 1e-8;

void check_root_separation(const SpinSystem& sys, const Eigen::VectorXcd& roots) {
    for (int p = 0; p < roots.size(); ++p)
        for (int i = 0; i < sys.n; ++i)
            if (std::abs(roots[p] - sys.epsilons[i]) <= sys.gap_tol)
                raise(errc::spectral_collision,
                      "root " + std::to_string(p) + " collides with eps_" + std::to_string(i));
}

void check_pairwise_distinct(const Eigen::VectorXcd& roots, double gap) {
    for (int p = 0; p < roots.size(); ++p)
        for (int q = p + 1; q < roots.size(); ++q)
            if (std::abs(roots[p] - roots[q]) < gap)
                raise(errc::coincident_roots,
                      "roots " + std::to_string(p) + " and " + std::to_string(q) +
                          " coincide");
}

// Horner evaluation of the monic polynomial with low-order coefficients c.
std::pair<Complex, Complex> eval_with_derivative(const Eigen::VectorXcd& c, Complex z) {
    Complex value = 1.0, derivative = 0.0;
    for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m) {
        derivative = derivative * z + value;
        value = value * z + c[m];
    }
    return {value, derivative};
}

Eigen::VectorXcd gammas(const SpinSystem& sys, const Eigen::VectorXcd& roots) {
    const FieldParams fp = field_params(sys);
    const int n = static_cast<int>(roots.size());
    Eigen::VectorXcd g(n);
    for (int p = 0; p < n; ++p) {
        Complex acc = -fp.b_z;
        for (int i = 0; i < sys.n; ++i) acc += 0.5 / (roots[p] - sys.epsilons[i]);
        for (int q = 0; q < n; ++q)
            if (q != p) acc += 1.0 / (roots[q] - roots[p]);
        g[p] = acc;
    }
    return g;
}

} // namespace

RootSet roots_from_lambdas(const SpinSystem& sys, const Eigen::VectorXcd& lambdas) {
    const int n = sys.n;
    if (lambdas.size() != n) raise(errc::dimension_mismatch, "need one Lambda per level");

    // Work with zero-mean epsilons; a common shift of levels and roots leaves
    // every Lambda unchanged but tames the Vandermonde-like powers below.
    const double mu =
        std::accumulate(sys.epsilons.begin(), sys.epsilons.end(), 0.0) / n;
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) e[i] = sys.epsilons[i] - mu;

    // Q(z) = z^n + sum_m c_m z^m from Q'(eps_i) - Lambda_i Q(eps_i) = 0.
    Eigen::MatrixXcd a(n, n);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd pw(n + 1);
        pw[0] = 1.0;
        for (int m = 1; m <= n; ++m) pw[m] = pw[m - 1] * e[i];
        a(i, 0) = -lambdas[i];
        for (int m = 1; m < n; ++m)
            a(i, m) = static_cast<double>(m) * pw[m - 1] - lambdas[i] * pw[m];
        rhs[i] = lambdas[i] * pw[n] - static_cast<double>(n) * pw[n - 1];
    }

    Eigen::VectorXd col_scale(n);
    for (int m = 0; m < n; ++m) {
        col_scale[m] = a.col(m).cwiseAbs().maxCoeff();
        if (col_scale[m] == 0.0) col_scale[m] = 1.0;
        a.col(m) /= col_scale[m];
    }

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
    const double umax = udiag.maxCoeff(), umin = udiag.minCoeff();
    if (umin == 0.0 || umax / umin > kConditionLimit)
        raise(errc::singular_conversion,
              "polynomial system singular (roots at infinity?)");
    Eigen::VectorXcd coeffs = lu.solve(rhs);
    coeffs.array() /= col_scale.array();

    RootSet rs;
    if (n == 1) {
        rs.roots.resize(1);
        rs.roots[0] = -coeffs[0];
    } else {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i];
        for (int i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        if (solver.info() != Eigen::Success)
            raise(errc::singular_conversion, "companion eigensolver failed");
        rs.roots = solver.eigenvalues();
    }

    for (int p = 0; p < n; ++p) {
        const auto [q, dq] = eval_with_derivative(coeffs, rs.roots[p]);
        if (std::abs(dq) > 0.0) rs.roots[p] -= q / dq;
        rs.roots[p] += mu;
        if (std::abs(rs.roots[p].imag()) < 1e-9 * (1.0 + std::abs(rs.roots[p].real())))
            rs.roots[p] = Complex(rs.roots[p].real(), 0.0);
    }

    Eigen::VectorXcd round_trip;
    try {
        round_trip = lambdas_from_roots(sys, rs);
    } catch (const Error&) {
        raise(errc::round_trip_failure, "recovered roots collide with the levels");
    }
    const double scale = 1.0 + lambdas.cwiseAbs().maxCoeff();
    const double err = (round_trip - lambdas).cwiseAbs().maxCoeff() / scale;
    if (!(err < kRoundTripTol))
        raise(errc::round_trip_failure,
              "Lambda round trip off by " + std::to_string(err));
    return rs;
}

RootSet roots_from_lambdas(const SpinSystem& sys, const Eigen::VectorXd& lambdas) {
    return roots_from_lambdas(sys, Eigen::VectorXcd(lambdas.cast<Complex>()));
}

Eigen::VectorXcd lambdas_from_roots(const SpinSystem& sys, const RootSet& rs) {
    check_root_separation(sys, rs.roots);
    Eigen::VectorXcd lambdas(sys.n);
    for (int i = 0; i < sys.n; ++i) {
        Complex acc = 0.0;
        for (int p = 0; p < rs.roots.size(); ++p)
            acc += 1.0 / (sys.epsilons[i] - rs.roots[p]);
        lambdas[i] = acc;
    }
    return lambdas;
}

Eigen::VectorXcd gamma_residuals(const SpinSystem& sys, const RootSet& rs) {
    check_pairwise_distinct(rs.roots, 1e-10);
    check_root_separation(sys, rs.roots);
    const FieldParams fp = field_params(sys);
    const int n = static_cast<int>(rs.roots.size());

    Eigen::VectorXcd residual = gammas(sys, rs.roots);
    for (int p = 0; p < n; ++p) {
        Complex ratio = 1.0;
        for (int k = 0; k < sys.n; ++k) ratio *= sys.epsilons[k] - rs.roots[p];
        for (int q = 0; q < n; ++q)
            if (q != p) ratio /= rs.roots[q] - rs.roots[p];
        residual[p] += 0.5 * fp.b_perp_sq * ratio;
    }
    return residual;
}

Complex lagrange_unit_sum(std::span<const double> epsilons, const RootSet& rs, int i) {
    const int n = static_cast<int>(epsilons.size());
    if (rs.size() != n)
        raise(errc::dimension_mismatch, "identity needs equal-cardinality sets");
    if (i < 0 || i >= n) raise(errc::site_out_of_range, "excluded index out of range");
    check_pairwise_distinct(rs.roots, 1e-10);

    Complex sum = 0.0;
    for (int p = 0; p < n; ++p) {
        Complex term = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != i) term *= epsilons[k] - rs.roots[p];
        for (int q = 0; q < n; ++q)
            if (q != p) term /= rs.roots[q] - rs.roots[p];
        sum += term;
    }
    return sum;
}

Complex zero_sum_identity(const SpinSystem& sys, const RootSet& rs,
                          std::span<const int> eps_subset) {
    if (eps_subset.size() < 2)
        raise(errc::dimension_mismatch, "identity requires r >= 2 levels");
    for (const int k : eps_subset)
        if (k < 0 || k >= sys.n) raise(errc::site_out_of_range, "subset index out of range");
    check_pairwise_distinct(rs.roots, 1e-10);
    check_root_separation(sys, rs.roots);

    const Eigen::VectorXcd g = gammas(sys, rs.roots);
    Complex sum = 0.0;
    for (int p = 0; p < rs.roots.size(); ++p) {
        Complex denom = 1.0;
        for (const int k : eps_subset) denom *= rs.roots[p] - sys.epsilons[k];
        sum += g[p] / denom;
    }
    return sum;
}

} // namespace gaudin
