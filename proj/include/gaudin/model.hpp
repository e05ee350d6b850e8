#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "gaudin/errors.hpp"

namespace gaudin {

using Complex = std::complex<double>;

/// Immutable problem definition: N spins-1/2 with pairwise-distinct level
/// parameters epsilon_i, coupled by 1/(eps_i - eps_j), in a uniform magnetic
/// field (Bx, By, Bz). Validated by build_system().
struct SpinSystem {
    int n = 0;
    std::vector<double> epsilons;
    std::array<double, 3> field{0.0, 0.0, 0.0};
    double gap_tol = 1e-9;

    std::size_t dim() const { return std::size_t{1} << n; }
};

/// Field constants derived from (Bx, By, Bz): the in-plane combinations
/// b_plus = Bx + i By, b_minus = Bx - i By, and the magnitudes.
struct FieldParams {
    Complex b_plus;
    Complex b_minus;
    double b_perp_sq = 0.0;
    double b_mag = 0.0;
    double b_z = 0.0;
};

SpinSystem build_system(std::vector<double> epsilons, std::array<double, 3> field,
                        double gap_tol = 1e-9);

FieldParams field_params(const SpinSystem& sys);

} // namespace gaudin
