#pragma once

#include <string>

#include "gaudin/bethe.hpp"
#include "gaudin/model.hpp"

namespace gaudin {

struct Config {
    SpinSystem system;
    SolverOptions solver;
};

/// Parse {"epsilons": [..], "field": {"bx","by","bz"}, "solver": {..},
/// "gap_tol": ..} from a JSON file. Malformed input raises config_error;
/// system validation errors pass through.
Config load_config(const std::string& path);

Config parse_config(const std::string& text);

} // namespace gaudin
