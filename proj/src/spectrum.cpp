#include "gaudin/spectrum.hpp"

namespace gaudin {

std::vector<SpectrumRecord> compute_spectrum(const SpinSystem& sys,
                                             std::span<const double> weights,
                                             const SolverOptions& opts, bool parallel) {
    if (static_cast<int>(weights.size()) != sys.n)
        raise(errc::dimension_mismatch, "need one weight per charge");

    const std::vector<BetheSolution> rotated =
        parallel ? solve_all(sys, opts) : solve_all_serial(sys, opts);

    std::vector<SpectrumRecord> records(rotated.size());
    for (std::size_t s = 0; s < rotated.size(); ++s) {
        const BetheSolution shifted = shift_frame(sys, rotated[s]);
        const BetheSolution polished =
            newton_refine(sys, Frame::common, shifted.lambdas, opts, shifted.label);

        SpectrumRecord& rec = records[s];
        rec.label = rotated[s].label;
        rec.lambdas_rotated = rotated[s].lambdas;
        rec.lambdas_common = polished.lambdas;
        rec.residual_rotated = rotated[s].residual;
        rec.residual_common = polished.residual;
        rec.charges = charge_eigenvalues(sys, polished);
        rec.energy = 0.0;
        for (int k = 0; k < sys.n; ++k) rec.energy += weights[k] * rec.charges[k];
    }
    return records;
}

} // namespace gaudin
