#include "gaudin/model.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace gaudin {

const char* errc_name(errc code) {
    switch (code) {
        case errc::duplicate_epsilon: return "duplicate_epsilon";
        case errc::empty_system: return "empty_system";
        case errc::site_out_of_range: return "site_out_of_range";
        case errc::spectral_collision: return "spectral_collision";
        case errc::zero_in_plane_field: return "zero_in_plane_field";
        case errc::zero_field: return "zero_field";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::no_convergence: return "no_convergence";
        case errc::singular_jacobian: return "singular_jacobian";
        case errc::continuation_stall: return "continuation_stall";
        case errc::duplicate_solution: return "duplicate_solution";
        case errc::wrong_frame: return "wrong_frame";
        case errc::singular_conversion: return "singular_conversion";
        case errc::round_trip_failure: return "round_trip_failure";
        case errc::coincident_roots: return "coincident_roots";
        case errc::bad_up_set: return "bad_up_set";
        case errc::incomplete_basis: return "incomplete_basis";
        case errc::non_hermitian_observable: return "non_hermitian_observable";
        case errc::config_error: return "config_error";
    }
    return "unknown";
}

SpinSystem build_system(std::vector<double> epsilons, std::array<double, 3> field,
                        double gap_tol) {
    if (epsilons.empty()) raise(errc::empty_system, "need at least one spin");

    const int n = static_cast<int>(epsilons.size());
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            min_gap = std::min(min_gap, std::abs(epsilons[i] - epsilons[j]));
    if (n > 1 && min_gap <= gap_tol)
        raise(errc::duplicate_epsilon,
              "min |eps_i - eps_j| = " + std::to_string(min_gap) + " <= gap_tol");

    SpinSystem sys;
    sys.n = n;
    sys.epsilons = std::move(epsilons);
    sys.field = field;
    sys.gap_tol = gap_tol;
    return sys;
}

FieldParams field_params(const SpinSystem& sys) {
    const double bx = sys.field[0], by = sys.field[1], bz = sys.field[2];
    FieldParams fp;
    fp.b_plus = Complex(bx, by);
    fp.b_minus = Complex(bx, -by);
    fp.b_perp_sq = bx * bx + by * by;
    fp.b_mag = std::sqrt(fp.b_perp_sq + bz * bz);
    fp.b_z = bz;
    return fp;
}

} // namespace gaudin
