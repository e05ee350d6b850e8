#include "gaudin/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaudin {

namespace {

using nlohmann::json;

double number_or(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) raise(errc::config_error, std::string(key) + " must be a number");
    return obj[key].get<double>();
}

} // namespace

Config parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(errc::config_error, std::string("invalid JSON: ") + e.what());
    }

    if (!root.contains("epsilons") || !root["epsilons"].is_array())
        raise(errc::config_error, "missing \"epsilons\" array");
    std::vector<double> epsilons;
    for (const auto& v : root["epsilons"]) {
        if (!v.is_number()) raise(errc::config_error, "epsilons must be numbers");
        epsilons.push_back(v.get<double>());
    }

    if (!root.contains("field") || !root["field"].is_object())
        raise(errc::config_error, "missing \"field\" object");
    const json& field = root["field"];
    const std::array<double, 3> b{number_or(field, "bx", 0.0), number_or(field, "by", 0.0),
                                  number_or(field, "bz", 0.0)};

    const double gap_tol = number_or(root, "gap_tol", 1e-9);

    Config cfg;
    cfg.system = build_system(std::move(epsilons), b, gap_tol);

    if (root.contains("solver")) {
        const json& solver = root["solver"];
        if (!solver.is_object()) raise(errc::config_error, "\"solver\" must be an object");
        cfg.solver.newton_tol = number_or(solver, "newton_tol", cfg.solver.newton_tol);
        cfg.solver.max_newton_iter = static_cast<int>(
            number_or(solver, "max_newton_iter", cfg.solver.max_newton_iter));
        cfg.solver.b_start_factor =
            number_or(solver, "b_start_factor", cfg.solver.b_start_factor);
        cfg.solver.step_shrink = number_or(solver, "step_shrink", cfg.solver.step_shrink);
        cfg.solver.min_step = number_or(solver, "min_step", cfg.solver.min_step);
        if (cfg.solver.newton_tol <= 0 || cfg.solver.max_newton_iter <= 0 ||
            cfg.solver.b_start_factor <= 0 || cfg.solver.step_shrink <= 0 ||
            cfg.solver.min_step <= 0)
            raise(errc::config_error, "solver options must be positive");
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::config_error, "cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace gaudin
