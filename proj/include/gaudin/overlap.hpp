#pragma once

#include <span>

#include <Eigen/Dense>

#include "gaudin/fock.hpp"
#include "gaudin/model.hpp"
#include "gaudin/roots.hpp"

namespace gaudin {

/// Complex value stored as mantissa * exp(log_scale); the determinant
/// prefactors span too many orders of magnitude to hold in one double.
struct LogScaledValue {
    Complex mantissa{0.0, 0.0};
    double log_scale = 0.0;

    Complex value() const { return mantissa * std::exp(log_scale); }
};

/// Scalar product <{mu}|{lambda}> of two N-root Bethe states through the
/// N x N determinant with J_aa = sum_{b != a} 1/(eps_a - eps_b)
/// - Lambda^lambda_a - Lambda^mu_a and J_ab = 1/(eps_a - eps_b), times
/// (b_plus)^N. Takes the two Lambda vectors; valid off-shell.
///
/// The bra here is the paper-dual state assembled from unconjugated mu roots:
/// for complex roots this is NOT the Hermitian adjoint. Hermitian norms are
/// computed numerically in Fock space instead.
LogScaledValue determinant_overlap(const SpinSystem& sys,
                                   const Eigen::VectorXcd& lambdas_a,
                                   const Eigen::VectorXcd& lambdas_b);

/// Same scalar product by brute contraction: apply all 2N raising operators
/// to the vacuum and read the fully flipped amplitude.
LogScaledValue direct_overlap(const SpinSystem& sys, const RootSet& roots_a,
                              const RootSet& roots_b);

/// Projection <up_{i_1}...up_{i_M}|{lambda}> via the M x M determinant
/// restricted to the up_set levels, times (b_plus)^(N-M). Needs only the
/// Lambda variables. M = 0 gives (b_plus)^N.
LogScaledValue canonical_projection(const SpinSystem& sys,
                                    const Eigen::VectorXcd& lambdas,
                                    std::span<const int> up_set);

/// Projection oracle: build the Bethe vector and read one amplitude.
LogScaledValue direct_projection(const SpinSystem& sys, const RootSet& roots,
                                 std::span<const int> up_set);

} // namespace gaudin
