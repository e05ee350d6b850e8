#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gaudin/model.hpp"
#include "gaudin/roots.hpp"

namespace gaudin {

using SparseOp = Eigen::SparseMatrix<Complex>;

/// Complex amplitude vector over the 2^N bitmask basis, bit k set = spin k up.
/// The vacuum |down...down> is index 0. The stored amplitudes carry an
/// accumulated rescaling exponent: true amplitude = amplitudes * exp(log_scale).
struct FockVector {
    Eigen::VectorXcd amplitudes;
    double log_scale = 0.0;

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm() * std::exp(log_scale); }
    FockVector normalized() const;
};

enum class LocalKind { raise, lower, z };

/// Spin-1/2 generator S^+_k, S^-_k or S^z_k on the full Fock space.
SparseOp local_operator(const SpinSystem& sys, LocalKind kind, int site);

/// Conserved charge R_k = B.S_k + sum_{j != k} S_k.S_j / (eps_k - eps_j).
SparseOp conserved_charge(const SpinSystem& sys, int k);

/// Gaudin raising operator S^+(u) = b_plus + sum_k S^+_k / (u - eps_k).
SparseOp gaudin_raising(const SpinSystem& sys, Complex u);

/// Transfer matrix S^2(u) = S^z(u)S^z(u) + (S^+(u)S^-(u) + S^-(u)S^+(u))/2,
/// whose residue at eps_k is 2 R_k.
SparseOp transfer_matrix(const SpinSystem& sys, Complex u);

/// Applies the product of raising operators S^+(roots[m-1])...S^+(roots[0])
/// to the vacuum, rescaling to unit max-norm after each factor. The factors
/// commute, so the order is immaterial. Roots may outnumber the sites.
FockVector apply_raising_chain(const SpinSystem& sys, std::span<const Complex> roots);

/// Bethe state: the product of the N raising operators S^+(lambda_p) applied
/// to the vacuum. Requires |B_perp| > 0; with no in-plane field the N-root
/// ansatz collapses onto the fully flipped sector.
FockVector bethe_vector(const SpinSystem& sys, const RootSet& roots);

double commutator_norm(const SparseOp& a, const SparseOp& b);

bool is_hermitian(const SparseOp& op, double tol = 1e-14);

Complex dot(const FockVector& a, const FockVector& b);

/// |<a|b>| / (|a||b|).
double cosine_similarity(const FockVector& a, const FockVector& b);

struct EdState {
    double energy = 0.0;
    FockVector vector;
    Eigen::VectorXd charges; // <v|R_k|v> for each k
};

struct EdSpectrum {
    std::vector<EdState> states; // sorted by energy
    bool degenerate = false;     // adjacent energies closer than 1e-10
};

/// Dense exact diagonalization of H = sum_k weights[k] R_k: the brute-force
/// reference all analytic formulas are tested against.
EdSpectrum ed_reference(const SpinSystem& sys, std::span<const double> weights);

struct ChargeMatch {
    std::vector<int> ed_index;  // per input charge vector, the matched ED state
    double max_distance = 0.0;  // worst Euclidean mismatch over the matching
};

/// Perfect matching between two equal-sized families of charge vectors,
/// greedily pairing globally nearest remaining vectors. Charge vectors, not
/// energies, are the matching key: energies can nearly collide.
ChargeMatch match_charge_vectors(const std::vector<Eigen::VectorXd>& lhs,
                                 const std::vector<Eigen::VectorXd>& rhs);

} // namespace gaudin
