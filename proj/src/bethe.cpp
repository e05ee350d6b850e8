#include "gaudin/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gaudin {

namespace {

// Shared structure of both quadratic systems: coupling matrix K_ij =
// 1/(eps_i - eps_j) with row sums, a linear coefficient and a constant.
// Common frame: linear = Bz, constant = |B_perp|^2. Rotated: linear = |B|
// (or the continuation field), constant = 0.
struct QuadraticSystem {
    Eigen::MatrixXd coupling;
    Eigen::VectorXd row_sum;
    double linear = 0.0;
    double constant = 0.0;

    QuadraticSystem(const SpinSystem& sys, double linear_, double constant_)
        : linear(linear_), constant(constant_) {
        const int n = sys.n;
        coupling = Eigen::MatrixXd::Zero(n, n);
        row_sum = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                coupling(i, j) = 1.0 / (sys.epsilons[i] - sys.epsilons[j]);
                row_sum[i] += coupling(i, j);
            }
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& lam) const {
        Eigen::VectorXd f = lam.array().square().matrix();
        f -= row_sum.cwiseProduct(lam);
        f += coupling * lam;
        f += (2.0 * linear) * lam;
        f.array() -= constant;
        return f;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& lam) const {
        Eigen::MatrixXd j = coupling;
        j.diagonal() = 2.0 * lam.array() - row_sum.array() + 2.0 * linear;
        return j;
    }
};

QuadraticSystem frame_system(const SpinSystem& sys, Frame frame) {
    const FieldParams fp = field_params(sys);
    if (frame == Frame::common) return {sys, fp.b_z, fp.b_perp_sq};
    if (fp.b_mag == 0.0) raise(errc::zero_field, "rotated frame undefined at |B| = 0");
    return {sys, fp.b_mag, 0.0};
}

// Newton with step halving; throws no_convergence / singular_jacobian.
Eigen::VectorXd newton_solve(const QuadraticSystem& qs, Eigen::VectorXd lam,
                             const SolverOptions& opts, double* residual_out) {
    Eigen::VectorXd f = qs.residual(lam);
    double r = f.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < opts.max_newton_iter; ++iter) {
        if (r < opts.newton_tol) break;

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(qs.jacobian(lam));
        const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
        const double umax = udiag.maxCoeff(), umin = udiag.minCoeff();
        if (umin == 0.0 || umax / umin > 1e14)
            raise(errc::singular_jacobian, "condition estimate above 1e14");

        const Eigen::VectorXd delta = lu.solve(-f);
        double step = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 40; ++halvings) {
            const Eigen::VectorXd trial = lam + step * delta;
            const Eigen::VectorXd ft = qs.residual(trial);
            const double rt = ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(rt) && rt < r) {
                lam = trial;
                f = ft;
                r = rt;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) raise(errc::no_convergence, "damping failed to reduce residual");
    }
    if (!(r < opts.newton_tol))
        raise(errc::no_convergence,
              "residual " + std::to_string(r) + " after max_newton_iter");
    *residual_out = r;
    return lam;
}

// One continuation path: from the decoupled seed at b_start down to the
// target field magnitude, halving the field step whenever Newton fails.
BetheSolution continue_seed(const SpinSystem& sys, std::uint32_t label, double b_start,
                            double b_target, const SolverOptions& opts) {
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(sys.n);
    for (int k = 0; k < sys.n; ++k)
        if ((label >> k) & 1u) lam[k] = -2.0 * b_start;

    BetheSolution sol;
    sol.frame = Frame::rotated;
    sol.label = label;

    double b = b_start;
    lam = newton_solve({sys, b, 0.0}, lam, opts, &sol.residual);
    while (b > b_target) {
        double step = b - std::max(b_target, 0.5 * b);
        for (;;) {
            const double b_next = std::max(b_target, b - step);
            try {
                Eigen::VectorXd refined =
                    newton_solve({sys, b_next, 0.0}, lam, opts, &sol.residual);
                lam = std::move(refined);
                b = b_next;
                break;
            } catch (const Error&) {
                step *= opts.step_shrink;
                if (step < opts.min_step)
                    raise(errc::continuation_stall,
                          "field step underflow at label " + std::to_string(label));
            }
        }
    }
    sol.lambdas = std::move(lam);
    return sol;
}

void check_distinct(const std::vector<BetheSolution>& sols) {
    const std::size_t count = sols.size();
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            const double d =
                (sols[i].lambdas - sols[j].lambdas).lpNorm<Eigen::Infinity>();
            if (d <= 1e-6)
                raise(errc::duplicate_solution,
                      "labels " + std::to_string(sols[i].label) + " and " +
                          std::to_string(sols[j].label) + " collapsed");
        }
}

std::pair<double, double> continuation_range(const SpinSystem& sys,
                                             const SolverOptions& opts) {
    const FieldParams fp = field_params(sys);
    if (fp.b_mag == 0.0) raise(errc::zero_field, "solve_all requires |B| > 0");
    const auto [emin, emax] =
        std::minmax_element(sys.epsilons.begin(), sys.epsilons.end());
    const double spread = *emax - *emin;
    const double b_start = opts.b_start_factor * std::max(fp.b_mag, spread + sys.n);
    return {b_start, fp.b_mag};
}

} // namespace

Eigen::VectorXd residual_common(const SpinSystem& sys, const Eigen::VectorXd& lambdas) {
    return frame_system(sys, Frame::common).residual(lambdas);
}

Eigen::VectorXd residual_rotated(const SpinSystem& sys, const Eigen::VectorXd& lambdas) {
    return frame_system(sys, Frame::rotated).residual(lambdas);
}

BetheSolution newton_refine(const SpinSystem& sys, Frame frame,
                            const Eigen::VectorXd& guess, const SolverOptions& opts,
                            std::uint32_t label) {
    if (guess.size() != sys.n) raise(errc::dimension_mismatch, "guess size != n");
    if (!guess.allFinite()) raise(errc::no_convergence, "non-finite initial guess");
    BetheSolution sol;
    sol.frame = frame;
    sol.label = label;
    sol.lambdas = newton_solve(frame_system(sys, frame), guess, opts, &sol.residual);
    return sol;
}

std::vector<BetheSolution> solve_all(const SpinSystem& sys, const SolverOptions& opts) {
    const auto [b_start, b_target] = continuation_range(sys, opts);
    const std::size_t count = sys.dim();
    std::vector<BetheSolution> sols(count);
    std::vector<std::exception_ptr> failures(count);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t label = 0; label < static_cast<std::int64_t>(count); ++label) {
        try {
            sols[label] = continue_seed(sys, static_cast<std::uint32_t>(label), b_start,
                                        b_target, opts);
        } catch (...) {
            failures[label] = std::current_exception();
        }
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    check_distinct(sols);
    return sols;
}

std::vector<BetheSolution> solve_all_serial(const SpinSystem& sys,
                                            const SolverOptions& opts) {
    const auto [b_start, b_target] = continuation_range(sys, opts);
    const std::size_t count = sys.dim();
    std::vector<BetheSolution> sols(count);
    for (std::size_t label = 0; label < count; ++label)
        sols[label] =
            continue_seed(sys, static_cast<std::uint32_t>(label), b_start, b_target, opts);

    check_distinct(sols);
    return sols;
}

BetheSolution shift_frame(const SpinSystem& sys, const BetheSolution& sol) {
    const FieldParams fp = field_params(sys);
    const double shift = fp.b_mag - fp.b_z; // rotated -> common adds this

    BetheSolution out = sol;
    if (sol.frame == Frame::rotated) {
        out.frame = Frame::common;
        out.lambdas.array() += shift;
        out.residual = residual_common(sys, out.lambdas).lpNorm<Eigen::Infinity>();
    } else {
        out.frame = Frame::rotated;
        out.lambdas.array() -= shift;
        out.residual = residual_rotated(sys, out.lambdas).lpNorm<Eigen::Infinity>();
    }
    return out;
}

Eigen::VectorXd charge_eigenvalues(const SpinSystem& sys, const BetheSolution& sol) {
    if (sol.frame != Frame::common)
        raise(errc::wrong_frame, "charge eigenvalues read off common-frame Lambdas");
    const FieldParams fp = field_params(sys);

    Eigen::VectorXd r(sys.n);
    for (int k = 0; k < sys.n; ++k) {
        double eps_sum = 0.0;
        for (int j = 0; j < sys.n; ++j)
            if (j != k) eps_sum += 1.0 / (sys.epsilons[k] - sys.epsilons[j]);
        r[k] = -0.5 * fp.b_z + 0.25 * eps_sum - 0.5 * sol.lambdas[k];
    }
    return r;
}

} // namespace gaudin
