#include "gaudin/overlap.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace gaudin {

namespace {

// Pivoted LU determinant accumulating log-magnitude; the mantissa stays on
// the unit circle (times zero for a singular matrix).
LogScaledValue log_det(Eigen::MatrixXcd m) {
    const int n = static_cast<int>(m.rows());
    LogScaledValue det{Complex(1.0, 0.0), 0.0};
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::abs(m(i, k));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) return {Complex(0.0, 0.0), 0.0};
        if (pivot != k) {
            m.row(pivot).swap(m.row(k));
            det.mantissa = -det.mantissa;
        }
        const Complex p = m(k, k);
        det.mantissa *= p / std::abs(p);
        det.log_scale += std::log(std::abs(p));
        for (int i = k + 1; i < n; ++i) {
            const Complex factor = m(i, k) / p;
            m.row(i).tail(n - k - 1) -= factor * m.row(k).tail(n - k - 1);
        }
    }
    return det;
}

// Multiply by b_plus^power in log-scaled form.
void apply_plane_prefactor(LogScaledValue& v, Complex b_plus, int power) {
    if (power == 0) return;
    const double mag = std::abs(b_plus);
    v.log_scale += power * std::log(mag);
    Complex phase = b_plus / mag;
    for (int i = 0; i < power; ++i) v.mantissa *= phase;
}

LogScaledValue amplitude_at(const FockVector& state, std::size_t index) {
    LogScaledValue v{state.amplitudes[static_cast<Eigen::Index>(index)], state.log_scale};
    return v;
}

std::size_t up_set_mask(const SpinSystem& sys, std::span<const int> up_set) {
    std::size_t mask = 0;
    for (const int site : up_set) {
        if (site < 0 || site >= sys.n)
            raise(errc::bad_up_set, "site " + std::to_string(site) + " out of range");
        const std::size_t bit = std::size_t{1} << site;
        if (mask & bit)
            raise(errc::bad_up_set, "site " + std::to_string(site) + " listed twice");
        mask |= bit;
    }
    return mask;
}

} // namespace

LogScaledValue determinant_overlap(const SpinSystem& sys,
                                   const Eigen::VectorXcd& lambdas_a,
                                   const Eigen::VectorXcd& lambdas_b) {
    const int n = sys.n;
    if (lambdas_a.size() != n || lambdas_b.size() != n)
        raise(errc::dimension_mismatch, "need one Lambda per level on both sides");
    const FieldParams fp = field_params(sys);
    if (fp.b_perp_sq == 0.0)
        raise(errc::zero_in_plane_field, "overlap prefactor vanishes at |B_perp| = 0");

    Eigen::MatrixXcd j(n, n);
    for (int a = 0; a < n; ++a) {
        Complex diag = -lambdas_a[a] - lambdas_b[a];
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            const double w = 1.0 / (sys.epsilons[a] - sys.epsilons[b]);
            j(a, b) = w;
            diag += w;
        }
        j(a, a) = diag;
    }

    LogScaledValue det = log_det(std::move(j));
    apply_plane_prefactor(det, fp.b_plus, n);
    return det;
}

LogScaledValue direct_overlap(const SpinSystem& sys, const RootSet& roots_a,
                              const RootSet& roots_b) {
    if (roots_a.size() != sys.n || roots_b.size() != sys.n)
        raise(errc::dimension_mismatch, "need N roots on each side");

    std::vector<Complex> nu(roots_a.roots.data(), roots_a.roots.data() + sys.n);
    nu.insert(nu.end(), roots_b.roots.data(), roots_b.roots.data() + sys.n);
    const FockVector state = apply_raising_chain(sys, nu);
    return amplitude_at(state, sys.dim() - 1);
}

LogScaledValue canonical_projection(const SpinSystem& sys,
                                    const Eigen::VectorXcd& lambdas,
                                    std::span<const int> up_set) {
    if (lambdas.size() != sys.n)
        raise(errc::dimension_mismatch, "need one Lambda per level");
    up_set_mask(sys, up_set); // validates
    const int m = static_cast<int>(up_set.size());
    const FieldParams fp = field_params(sys);
    if (fp.b_perp_sq == 0.0 && m < sys.n)
        raise(errc::zero_in_plane_field,
              "projection prefactor vanishes at |B_perp| = 0 unless all spins flip");

    LogScaledValue det{Complex(1.0, 0.0), 0.0}; // empty determinant
    if (m > 0) {
        Eigen::MatrixXcd j(m, m);
        for (int a = 0; a < m; ++a) {
            Complex diag = -lambdas[up_set[a]];
            for (int b = 0; b < m; ++b) {
                if (b == a) continue;
                const double w =
                    1.0 / (sys.epsilons[up_set[a]] - sys.epsilons[up_set[b]]);
                j(a, b) = w;
                diag += w;
            }
            j(a, a) = diag;
        }
        det = log_det(std::move(j));
    }
    apply_plane_prefactor(det, fp.b_plus, sys.n - m);
    return det;
}

LogScaledValue direct_projection(const SpinSystem& sys, const RootSet& roots,
                                 std::span<const int> up_set) {
    const std::size_t mask = up_set_mask(sys, up_set);
    const FockVector state = bethe_vector(sys, roots);
    return amplitude_at(state, mask);
}

} // namespace gaudin
