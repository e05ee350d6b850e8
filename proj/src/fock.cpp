#include "gaudin/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace gaudin {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_site(const SpinSystem& sys, int site) {
    if (site < 0 || site >= sys.n)
        raise(errc::site_out_of_range,
              "site " + std::to_string(site) + " outside [0, " + std::to_string(sys.n) + ")");
}

double z_half(std::size_t mask, int site) { return (mask >> site) & 1u ? 0.5 : -0.5; }

} // namespace

FockVector FockVector::normalized() const {
    FockVector out;
    const double nrm = amplitudes.norm();
    out.amplitudes = nrm > 0.0 ? Eigen::VectorXcd(amplitudes / nrm) : amplitudes;
    out.log_scale = 0.0;
    return out;
}

SparseOp local_operator(const SpinSystem& sys, LocalKind kind, int site) {
    check_site(sys, site);
    const std::size_t dim = sys.dim();
    const std::size_t bit = std::size_t{1} << site;

    std::vector<Triplet> entries;
    entries.reserve(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        switch (kind) {
            case LocalKind::z:
                entries.emplace_back(m, m, z_half(m, site));
                break;
            case LocalKind::raise:
                if (!(m & bit)) entries.emplace_back(m | bit, m, 1.0);
                break;
            case LocalKind::lower:
                if (m & bit) entries.emplace_back(m & ~bit, m, 1.0);
                break;
        }
    }

    SparseOp op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseOp conserved_charge(const SpinSystem& sys, int k) {
    check_site(sys, k);
    const std::size_t dim = sys.dim();
    const std::size_t bit_k = std::size_t{1} << k;
    const FieldParams fp = field_params(sys);
    const auto& eps = sys.epsilons;

    std::vector<Triplet> entries;
    entries.reserve(dim * static_cast<std::size_t>(sys.n + 2));

    for (std::size_t m = 0; m < dim; ++m) {
        // Zeeman term B.S_k = Bz S^z_k + (b_plus/2) S^-_k + (b_minus/2) S^+_k.
        double diag = fp.b_z * z_half(m, k);
        if (m & bit_k) {
            entries.emplace_back(m & ~bit_k, m, fp.b_plus / 2.0);
        } else {
            entries.emplace_back(m | bit_k, m, fp.b_minus / 2.0);
        }

        for (int j = 0; j < sys.n; ++j) {
            if (j == k) continue;
            const double w = 1.0 / (eps[k] - eps[j]);
            const std::size_t bit_j = std::size_t{1} << j;
            diag += w * z_half(m, k) * z_half(m, j);
            // Flip-flop (S^+_k S^-_j + S^-_k S^+_j)/2 moves one excitation.
            if ((m & bit_j) && !(m & bit_k))
                entries.emplace_back((m & ~bit_j) | bit_k, m, 0.5 * w);
            if ((m & bit_k) && !(m & bit_j))
                entries.emplace_back((m & ~bit_k) | bit_j, m, 0.5 * w);
        }
        entries.emplace_back(m, m, diag);
    }

    SparseOp op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseOp gaudin_raising(const SpinSystem& sys, Complex u) {
    const FieldParams fp = field_params(sys);
    const std::size_t dim = sys.dim();

    std::vector<Triplet> entries;
    entries.reserve(dim * static_cast<std::size_t>(sys.n + 1));
    for (int k = 0; k < sys.n; ++k) {
        if (std::abs(u - sys.epsilons[k]) <= sys.gap_tol)
            raise(errc::spectral_collision, "spectral parameter collides with eps_" + std::to_string(k));
    }
    for (std::size_t m = 0; m < dim; ++m) {
        entries.emplace_back(m, m, fp.b_plus);
        for (int k = 0; k < sys.n; ++k) {
            const std::size_t bit = std::size_t{1} << k;
            if (!(m & bit)) entries.emplace_back(m | bit, m, 1.0 / (u - sys.epsilons[k]));
        }
    }

    SparseOp op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseOp transfer_matrix(const SpinSystem& sys, Complex u) {
    const FieldParams fp = field_params(sys);
    const std::size_t dim = sys.dim();
    for (int k = 0; k < sys.n; ++k) {
        if (std::abs(u - sys.epsilons[k]) <= sys.gap_tol)
            raise(errc::spectral_collision, "spectral parameter collides with eps_" + std::to_string(k));
    }

    std::vector<Triplet> sz_entries, sm_entries;
    for (std::size_t m = 0; m < dim; ++m) {
        Complex zdiag = -fp.b_z;
        for (int k = 0; k < sys.n; ++k) {
            const Complex w = 1.0 / (u - sys.epsilons[k]);
            const std::size_t bit = std::size_t{1} << k;
            zdiag -= w * z_half(m, k);
            if (m & bit) sm_entries.emplace_back(m & ~bit, m, w);
        }
        sz_entries.emplace_back(m, m, zdiag);
        sm_entries.emplace_back(m, m, fp.b_minus);
    }

    SparseOp sz(dim, dim), sm(dim, dim);
    sz.setFromTriplets(sz_entries.begin(), sz_entries.end());
    sm.setFromTriplets(sm_entries.begin(), sm_entries.end());
    const SparseOp sp = gaudin_raising(sys, u);

    SparseOp out = SparseOp(sz * sz) + SparseOp(Complex(0.5) * (sp * sm)) +
                   SparseOp(Complex(0.5) * (sm * sp));
    out.makeCompressed();
    return out;
}

FockVector apply_raising_chain(const SpinSystem& sys, std::span<const Complex> roots) {
    const std::size_t dim = sys.dim();
    const FieldParams fp = field_params(sys);

    FockVector state;
    state.amplitudes = Eigen::VectorXcd::Zero(dim);
    state.amplitudes[0] = 1.0;

    Eigen::VectorXcd next(dim);
    for (const Complex lambda : roots) {
        for (int k = 0; k < sys.n; ++k) {
            if (std::abs(lambda - sys.epsilons[k]) <= sys.gap_tol)
                raise(errc::spectral_collision,
                      "Bethe root collides with eps_" + std::to_string(k));
        }
        next = fp.b_plus * state.amplitudes;
        for (int k = 0; k < sys.n; ++k) {
            const Complex w = 1.0 / (lambda - sys.epsilons[k]);
            const std::size_t bit = std::size_t{1} << k;
            for (std::size_t m = 0; m < dim; ++m) {
                if (!(m & bit)) next[m | bit] += w * state.amplitudes[m];
            }
        }
        // Keep amplitudes at unit max-norm; the product of b_plus constants and
        // Cauchy factors otherwise drifts out of double range as N grows.
        const double peak = next.cwiseAbs().maxCoeff();
        if (peak > 0.0) {
            next /= peak;
            state.log_scale += std::log(peak);
        }
        state.amplitudes.swap(next);
    }
    return state;
}

FockVector bethe_vector(const SpinSystem& sys, const RootSet& roots) {
    if (roots.size() != sys.n)
        raise(errc::dimension_mismatch, "expected exactly n Bethe roots");
    const FieldParams fp = field_params(sys);
    if (fp.b_perp_sq == 0.0)
        raise(errc::zero_in_plane_field, "N-root ansatz degenerates at |B_perp| = 0");
    return apply_raising_chain(
        sys, std::span<const Complex>(roots.roots.data(), roots.roots.size()));
}

double commutator_norm(const SparseOp& a, const SparseOp& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise(errc::dimension_mismatch, "operators act on different spaces");
    const SparseOp comm = SparseOp(a * b) - SparseOp(b * a);
    return comm.norm();
}

bool is_hermitian(const SparseOp& op, double tol) {
    SparseOp diff = SparseOp(op - SparseOp(op.adjoint()));
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseOp::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst < tol;
}

Complex dot(const FockVector& a, const FockVector& b) {
    if (a.dim() != b.dim()) raise(errc::dimension_mismatch, "vector dimensions differ");
    return a.amplitudes.dot(b.amplitudes) * std::exp(a.log_scale + b.log_scale);
}

double cosine_similarity(const FockVector& a, const FockVector& b) {
    if (a.dim() != b.dim()) raise(errc::dimension_mismatch, "vector dimensions differ");
    const double na = a.amplitudes.norm(), nb = b.amplitudes.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(a.amplitudes.dot(b.amplitudes)) / (na * nb);
}

EdSpectrum ed_reference(const SpinSystem& sys, std::span<const double> weights) {
    if (static_cast<int>(weights.size()) != sys.n)
        raise(errc::dimension_mismatch, "need one weight per charge");
    const std::size_t dim = sys.dim();

    std::vector<SparseOp> charges;
    charges.reserve(sys.n);
    for (int k = 0; k < sys.n; ++k) charges.push_back(conserved_charge(sys, k));

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < sys.n; ++k) h += weights[k] * Eigen::MatrixXcd(charges[k]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        raise(errc::no_convergence, "dense eigensolver failed");

    EdSpectrum spectrum;
    spectrum.states.resize(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        EdState& state = spectrum.states[s];
        state.energy = solver.eigenvalues()[s];
        state.vector.amplitudes = solver.eigenvectors().col(s);
        state.vector.log_scale = 0.0;
        state.charges.resize(sys.n);
        for (int k = 0; k < sys.n; ++k) {
            const Eigen::VectorXcd rv = charges[k] * state.vector.amplitudes;
            state.charges[k] = state.vector.amplitudes.dot(rv).real();
        }
        if (s > 0 && state.energy - spectrum.states[s - 1].energy < 1e-10)
            spectrum.degenerate = true;
    }
    return spectrum;
}

ChargeMatch match_charge_vectors(const std::vector<Eigen::VectorXd>& lhs,
                                 const std::vector<Eigen::VectorXd>& rhs) {
    if (lhs.size() != rhs.size())
        raise(errc::dimension_mismatch, "matching requires equal-sized families");
    const int m = static_cast<int>(lhs.size());

    std::vector<std::tuple<double, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            pairs.emplace_back((lhs[i] - rhs[j]).norm(), i, j);
    std::sort(pairs.begin(), pairs.end());

    ChargeMatch match;
    match.ed_index.assign(m, -1);
    std::vector<bool> lhs_used(m, false), rhs_used(m, false);
    int assigned = 0;
    for (const auto& [d, i, j] : pairs) {
        if (lhs_used[i] || rhs_used[j]) continue;
        lhs_used[i] = rhs_used[j] = true;
        match.ed_index[i] = j;
        match.max_distance = std::max(match.max_distance, d);
        if (++assigned == m) break;
    }
    return match;
}

} // namespace gaudin
