#include "gaudin/dynamics.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "gaudin/overlap.hpp"
#include "gaudin/roots.hpp"

namespace gaudin {

namespace {

std::size_t up_set_to_mask(const SpinSystem& sys, std::span<const int> up_set) {
    std::size_t mask = 0;
    for (const int site : up_set) {
        if (site < 0 || site >= sys.n)
            raise(errc::bad_up_set, "site " + std::to_string(site) + " out of range");
        const std::size_t bit = std::size_t{1} << site;
        if (mask & bit) raise(errc::bad_up_set, "duplicate site in up set");
        mask |= bit;
    }
    return mask;
}

SparseOp build_observable(const SpinSystem& sys, ObservableKind kind, int site) {
    const SparseOp sp = local_operator(sys, LocalKind::raise, site);
    const SparseOp sm = local_operator(sys, LocalKind::lower, site);
    switch (kind) {
        case ObservableKind::sz: return local_operator(sys, LocalKind::z, site);
        case ObservableKind::sx: return SparseOp(Complex(0.5) * SparseOp(sp + sm));
        case ObservableKind::sy:
            return SparseOp(Complex(0.0, -0.5) * SparseOp(sp - sm));
    }
    raise(errc::config_error, "unknown observable kind");
}

} // namespace

EigenExpansion eigen_expand(const SpinSystem& sys, std::span<const int> initial_up_set,
                            std::span<const double> weights,
                            const std::vector<BetheSolution>& solutions,
                            const SolverOptions& opts) {
    if (static_cast<int>(weights.size()) != sys.n)
        raise(errc::dimension_mismatch, "need one weight per charge");
    if (solutions.size() != sys.dim())
        raise(errc::incomplete_basis,
              "expected the full set of " + std::to_string(sys.dim()) + " solutions");
    const std::size_t mask = up_set_to_mask(sys, initial_up_set);
    const FieldParams fp = field_params(sys);

    EigenExpansion exp;
    exp.terms.resize(solutions.size());
    exp.states.resize(solutions.size());

    for (std::size_t s = 0; s < solutions.size(); ++s) {
        BetheSolution common = solutions[s].frame == Frame::common
                                   ? solutions[s]
                                   : shift_frame(sys, solutions[s]);
        ExpansionTerm& term = exp.terms[s];
        term.label = common.label;

        const Eigen::VectorXd charges = charge_eigenvalues(sys, common);
        term.energy = 0.0;
        for (int k = 0; k < sys.n; ++k) term.energy += weights[k] * charges[k];

        RootSet roots;
        try {
            roots = roots_from_lambdas(sys, common.lambdas);
        } catch (const Error& e) {
            if (e.code() != errc::singular_conversion) throw;
            term.constructed = false;
            term.coeff = 0.0;
            continue;
        }

        const FockVector raw = apply_raising_chain(
            sys, std::span<const Complex>(roots.roots.data(), roots.roots.size()));
        term.fock_norm = raw.norm();
        exp.states[s] = raw.normalized();
        term.coeff = std::conj(exp.states[s].amplitudes[static_cast<Eigen::Index>(mask)]);

        // The determinant projection must reproduce the raw amplitude.
        if (fp.b_perp_sq > 0.0 || initial_up_set.size() == static_cast<std::size_t>(sys.n)) {
            const Complex det_amp =
                canonical_projection(sys, common.lambdas.cast<Complex>(), initial_up_set)
                    .value();
            const Complex raw_amp = raw.amplitudes[static_cast<Eigen::Index>(mask)] *
                                    std::exp(raw.log_scale);
            const double dev = std::abs(det_amp - raw_amp) / (1.0 + std::abs(raw_amp));
            exp.projection_check = std::max(exp.projection_check, dev);
        }
    }

    exp.sum_sq = 0.0;
    for (const ExpansionTerm& term : exp.terms) exp.sum_sq += std::norm(term.coeff);
    if (std::abs(exp.sum_sq - 1.0) > 1e-6)
        raise(errc::incomplete_basis,
              "sum |c_n|^2 = " + std::to_string(exp.sum_sq) + " deviates from 1");
    return exp;
}

std::vector<double> evolve_observable(const SpinSystem& sys, const QuenchSpec& spec,
                                      const EigenExpansion& expansion) {
    if (spec.steps < 1) raise(errc::config_error, "need at least one time step");
    const SparseOp obs = build_observable(sys, spec.observable, spec.site);
    if (!is_hermitian(obs))
        raise(errc::non_hermitian_observable, "observable failed the Hermiticity check");

    const int count = static_cast<int>(expansion.terms.size());
    Eigen::VectorXcd coeffs(count);
    Eigen::VectorXd energies(count);
    for (int s = 0; s < count; ++s) {
        coeffs[s] = expansion.terms[s].coeff;
        energies[s] = expansion.terms[s].energy;
    }

    // <n|O|m>, computed once per quench and reused across the grid.
    Eigen::MatrixXcd elements = Eigen::MatrixXcd::Zero(count, count);
    for (int m = 0; m < count; ++m) {
        if (!expansion.terms[m].constructed) continue;
        const Eigen::VectorXcd om = obs * expansion.states[m].amplitudes;
        for (int n = 0; n < count; ++n) {
            if (!expansion.terms[n].constructed) continue;
            elements(n, m) = expansion.states[n].amplitudes.dot(om);
        }
    }

    const double dt = spec.steps > 1 ? (spec.t1 - spec.t0) / (spec.steps - 1) : 0.0;
    std::vector<double> series(spec.steps);
    double worst_imag = 0.0;

#pragma omp parallel for schedule(static) reduction(max : worst_imag)
    for (int j = 0; j < spec.steps; ++j) {
        const double t = spec.t0 + dt * j;
        const Eigen::VectorXcd phased =
            coeffs.array() * (Complex(0.0, -1.0) * energies.array() * t).exp();
        const Complex value = phased.dot(elements * phased);
        worst_imag = std::max(worst_imag, std::abs(value.imag()));
        series[j] = value.real();
    }
    if (worst_imag > 1e-10)
        raise(errc::non_hermitian_observable,
              "imaginary residue " + std::to_string(worst_imag) + " in the series");
    return series;
}

FockVector direct_propagate(const SpinSystem& sys, std::span<const double> weights,
                            const FockVector& initial, double t) {
    if (initial.dim() != sys.dim())
        raise(errc::dimension_mismatch, "state dimension != 2^n");
    const EdSpectrum spectrum = ed_reference(sys, weights);
    const std::size_t dim = sys.dim();

    Eigen::MatrixXcd basis(dim, dim);
    Eigen::VectorXd energies(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        basis.col(s) = spectrum.states[s].vector.amplitudes;
        energies[s] = spectrum.states[s].energy;
    }

    Eigen::VectorXcd modal = basis.adjoint() * initial.amplitudes;
    modal.array() *= (Complex(0.0, -1.0) * energies.array() * t).exp();

    FockVector out;
    out.amplitudes = basis * modal;
    out.log_scale = initial.log_scale;
    return out;
}

} // namespace gaudin
