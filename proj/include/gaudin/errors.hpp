#pragma once

#include <stdexcept>
#include <string>

namespace gaudin {

enum class errc {
    duplicate_epsilon,
    empty_system,
    site_out_of_range,
    spectral_collision,
    zero_in_plane_field,
    zero_field,
    dimension_mismatch,
    no_convergence,
    singular_jacobian,
    continuation_stall,
    duplicate_solution,
    wrong_frame,
    singular_conversion,
    round_trip_failure,
    coincident_roots,
    bad_up_set,
    incomplete_basis,
    non_hermitian_observable,
    config_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

} // namespace gaudin
