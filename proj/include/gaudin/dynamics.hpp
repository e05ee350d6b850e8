#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gaudin/bethe.hpp"
#include "gaudin/fock.hpp"
#include "gaudin/model.hpp"

namespace gaudin {

enum class ObservableKind { sz, sx, sy };

/// Quench protocol: start from a canonical product state (the listed sites
/// up, the rest down), evolve under H = sum_k weights[k] R_k, record one
/// local spin component on a uniform time grid.
struct QuenchSpec {
    std::vector<int> initial_up_set;
    std::vector<double> weights;
    ObservableKind observable = ObservableKind::sz;
    int site = 0;
    double t0 = 0.0;
    double t1 = 10.0;
    int steps = 101;
};

struct ExpansionTerm {
    std::uint32_t label = 0;
    double energy = 0.0;     // sum_k weights[k] r_k
    Complex coeff{0.0, 0.0}; // <n|psi_0>
    double fock_norm = 0.0;  // norm of the raw Bethe vector before normalization
    bool constructed = true; // false when the state's roots escape to infinity
};

struct EigenExpansion {
    std::vector<ExpansionTerm> terms;
    std::vector<FockVector> states; // normalized eigenvectors, aligned with terms
    double sum_sq = 0.0;            // sum |c_n|^2, should be 1
    double projection_check = 0.0;  // worst determinant-vs-amplitude deviation
};

/// Decompose |up_{i_1}...up_{i_M}> over the Bethe eigenbasis. Each solution is
/// shifted to the common frame, converted to roots and realized as a Fock
/// vector; raw projections are cross-checked against the determinant formula.
/// States whose root conversion is singular (|B_perp| = 0 limits) contribute
/// zero; if the expansion then fails to resolve the initial state the basis
/// is reported incomplete.
EigenExpansion eigen_expand(const SpinSystem& sys, std::span<const int> initial_up_set,
                            std::span<const double> weights,
                            const std::vector<BetheSolution>& solutions,
                            const SolverOptions& opts = {});

/// O(t) = sum_{n,m} conj(c_n) c_m exp(-i (E_m - E_n) t) <n|O|m> on the
/// spec's time grid. Matrix elements are precomputed once; grid points are
/// evaluated in parallel.
std::vector<double> evolve_observable(const SpinSystem& sys, const QuenchSpec& spec,
                                      const EigenExpansion& expansion);

/// exp(-i H t)|psi> through dense diagonalization of H = sum_k weights[k] R_k.
FockVector direct_propagate(const SpinSystem& sys, std::span<const double> weights,
                            const FockVector& initial, double t);

} // namespace gaudin
