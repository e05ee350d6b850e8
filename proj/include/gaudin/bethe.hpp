#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gaudin/model.hpp"

namespace gaudin {

enum class Frame { common, rotated };

/// One eigenstate in the Lambda representation: n real values Lambda_i
/// (common frame) or Lambda~_i (rotated frame), tagged by the continuation
/// seed bit string that produced it.
struct BetheSolution {
    Frame frame = Frame::rotated;
    Eigen::VectorXd lambdas;
    std::uint32_t label = 0;
    double residual = 0.0;
};

struct SolverOptions {
    double newton_tol = 1e-12;
    int max_newton_iter = 50;
    double b_start_factor = 4.0;
    double step_shrink = 0.5;
    double min_step = 1e-8;
};

/// Residual of the common-frame quadratic equations:
/// F_i = Lambda_i^2 - sum_{j != i} (Lambda_i - Lambda_j)/(eps_i - eps_j)
///       + 2 Bz Lambda_i - |B_perp|^2.
Eigen::VectorXd residual_common(const SpinSystem& sys, const Eigen::VectorXd& lambdas);

/// Residual of the rotated-frame quadratic equations (same coupling terms,
/// linear coefficient 2|B|, zero constant). Requires |B| > 0.
Eigen::VectorXd residual_rotated(const SpinSystem& sys, const Eigen::VectorXd& lambdas);

/// Damped Newton on the quadratic equations of the given frame, with the
/// analytic Jacobian. Steps are halved until the residual max-norm decreases.
BetheSolution newton_refine(const SpinSystem& sys, Frame frame,
                            const Eigen::VectorXd& guess, const SolverOptions& opts = {},
                            std::uint32_t label = 0);

/// All 2^n rotated-frame solutions, by homotopy continuation in the field
/// magnitude from the decoupled large-field limit down to |B|. Seeds: bit k
/// of the label set means Lambda~_k starts at -2 B_start, clear means 0.
/// Output is sorted by label. OpenMP-parallel over seeds.
std::vector<BetheSolution> solve_all(const SpinSystem& sys, const SolverOptions& opts = {});

/// Serial reference for solve_all; identical per-seed arithmetic.
std::vector<BetheSolution> solve_all_serial(const SpinSystem& sys,
                                            const SolverOptions& opts = {});

/// Toggle between frames: Lambda = Lambda~ + |B| - Bz. The residual is
/// recomputed in the target frame.
BetheSolution shift_frame(const SpinSystem& sys, const BetheSolution& sol);

/// Conserved-charge eigenvalues from a common-frame solution:
/// r_k = -Bz/2 + (1/4) sum_{j != k} 1/(eps_k - eps_j) - Lambda_k/2.
Eigen::VectorXd charge_eigenvalues(const SpinSystem& sys, const BetheSolution& sol);

} // namespace gaudin
