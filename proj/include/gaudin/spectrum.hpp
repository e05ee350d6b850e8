#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gaudin/bethe.hpp"
#include "gaudin/model.hpp"

namespace gaudin {

/// One fully resolved eigenstate: both Lambda frames, the conserved-charge
/// eigenvalues and the energy under the given weights.
struct SpectrumRecord {
    std::uint32_t label = 0;
    Eigen::VectorXd lambdas_rotated;
    Eigen::VectorXd lambdas_common;
    Eigen::VectorXd charges;
    double energy = 0.0;
    double residual_rotated = 0.0;
    double residual_common = 0.0;
};

/// solve_all, then per state: shift to the common frame, polish with Newton
/// on the common-frame equations, and read off charges and energy.
std::vector<SpectrumRecord> compute_spectrum(const SpinSystem& sys,
                                             std::span<const double> weights,
                                             const SolverOptions& opts = {},
                                             bool parallel = true);

} // namespace gaudin
