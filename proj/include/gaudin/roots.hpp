#pragma once

#include <span>

#include <Eigen/Dense>

#include "gaudin/model.hpp"

namespace gaudin {

/// N Bethe roots lambda_p. On-shell sets derived from real Lambda variables
/// are closed under complex conjugation (up to numerical noise).
struct RootSet {
    Eigen::VectorXcd roots;

    int size() const { return static_cast<int>(roots.size()); }
};

/// Invert Lambda_i = sum_p 1/(eps_i - lambda_p) for the roots. The monic
/// polynomial with the lambda_p as zeros is recovered from the n linear
/// conditions Q'(eps_i) = Lambda_i Q(eps_i), then factored through its
/// companion matrix with one Newton polish per root.
RootSet roots_from_lambdas(const SpinSystem& sys, const Eigen::VectorXcd& lambdas);
RootSet roots_from_lambdas(const SpinSystem& sys, const Eigen::VectorXd& lambdas);

/// Lambda_i = sum_p 1/(eps_i - lambda_p), evaluated exactly.
Eigen::VectorXcd lambdas_from_roots(const SpinSystem& sys, const RootSet& rs);

/// Residuals of the root-form Bethe equations: Gamma_p plus the in-plane
/// product term. Zero iff the roots are on-shell.
Eigen::VectorXcd gamma_residuals(const SpinSystem& sys, const RootSet& rs);

/// sum_p prod_{k != i}(eps_k - lambda_p) / prod_{q != p}(lambda_q - lambda_p).
/// Equals 1 for arbitrary distinct sets; exposed so the identity can be
/// property-tested on random data.
Complex lagrange_unit_sum(std::span<const double> epsilons, const RootSet& rs, int i);

/// sum_p Gamma_p / prod_j (lambda_p - eps_{k_j}) over a subset of r >= 2
/// level indices. Vanishes on-shell.
Complex zero_sum_identity(const SpinSystem& sys, const RootSet& rs,
                          std::span<const int> eps_subset);

} // namespace gaudin
