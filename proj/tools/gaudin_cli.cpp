// gaudin: spectra, verification, root reconstruction, scalar products and
// quench dynamics for spin-1/2 rational Gaudin magnets in arbitrary fields.
//
// Exit codes: 0 ok, 2 config/usage error, 3 solver failure, 4 verification
// failure. Failures print {"code", "message"} JSON to stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gaudin/config.hpp"
#include "gaudin/dynamics.hpp"
#include "gaudin/fock.hpp"
#include "gaudin/io.hpp"
#include "gaudin/overlap.hpp"
#include "gaudin/roots.hpp"
#include "gaudin/spectrum.hpp"

using namespace gaudin;
using nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr double kTolMatch = 1e-8;
constexpr double kTolCommutator = 1e-12;
constexpr double kTolResidual = 1e-10;
constexpr double kTolSumRule = 1e-8;
constexpr double kTolSingleSpin = 1e-12;
constexpr double kTolQuenchCheck = 1e-8;

int exit_code_for(errc code) {
    switch (code) {
        case errc::config_error:
        case errc::duplicate_epsilon:
        case errc::empty_system:
        case errc::bad_up_set:
        case errc::site_out_of_range:
        case errc::zero_field:
        case errc::zero_in_plane_field:
        case errc::wrong_frame:
        case errc::dimension_mismatch:
            return 2;
        default:
            return 3;
    }
}

void print_error(errc code, const std::string& message) {
    ordered_json err;
    err["code"] = errc_name(code);
    err["message"] = message;
    std::cerr << err.dump() << "\n";
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    if (text.empty()) return values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            raise(errc::config_error, "cannot parse number '" + item + "'");
        }
    }
    return values;
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> indices;
    for (const double v : parse_double_list(text))
        indices.push_back(static_cast<int>(std::lround(v)));
    return indices;
}

std::vector<int> parse_bit_string(const std::string& bits, int n) {
    if (static_cast<int>(bits.size()) != n)
        raise(errc::config_error,
              "initial state needs exactly " + std::to_string(n) + " bits");
    std::vector<int> up_set;
    for (int site = 0; site < n; ++site) {
        if (bits[site] == '1')
            up_set.push_back(site);
        else if (bits[site] != '0')
            raise(errc::config_error, "initial state must be a 0/1 string");
    }
    return up_set;
}

std::pair<ObservableKind, int> parse_observable(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        raise(errc::config_error, "observable must look like sz:0");
    const std::string kind = text.substr(0, colon);
    int site = 0;
    try {
        site = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        raise(errc::config_error, "bad observable site in '" + text + "'");
    }
    if (kind == "sz") return {ObservableKind::sz, site};
    if (kind == "sx") return {ObservableKind::sx, site};
    if (kind == "sy") return {ObservableKind::sy, site};
    raise(errc::config_error, "observable kind must be sz, sx or sy");
}

std::vector<double> effective_weights(const std::string& flag, int n) {
    if (flag.empty()) return std::vector<double>(n, 1.0);
    std::vector<double> w = parse_double_list(flag);
    if (static_cast<int>(w.size()) != n)
        raise(errc::config_error, "need exactly n weights");
    return w;
}

// Pairwise-distinct generic weights: keeps H = sum alpha_k R_k nondegenerate
// so per-state ED charge expectations are well defined.
std::vector<double> generic_weights(int n) {
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) w[k] = 1.0 + (k + 1) * 0.31830988618379067;
    return w;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json value_to_json(const LogScaledValue& v) {
    ordered_json obj;
    obj["value_re"] = v.mantissa.real();
    obj["value_im"] = v.mantissa.imag();
    obj["log_scale"] = v.log_scale;
    return obj;
}

struct RunContext {
    std::string command;
    std::string config_path;
    ordered_json options;
    std::vector<std::string> outputs;
    clock_type::time_point start = clock_type::now();

    ordered_json manifest() const {
        ordered_json m;
        m["version"] = kVersion;
        m["command"] = command;
        m["config"] = config_path;
        m["options"] = options;
        m["wall_time_s"] =
            std::chrono::duration<double>(clock_type::now() - start).count();
        m["outputs"] = outputs;
        return m;
    }
};

// With --out: write the payload plus a sibling manifest file. Without:
// print one JSON document with the manifest embedded.
void deliver(RunContext& ctx, ordered_json payload, const std::string& out_path) {
    if (!out_path.empty()) {
        ctx.outputs.push_back(out_path);
        write_text_file(out_path, dump_json(payload));
        write_text_file(out_path + ".manifest.json", dump_json(ctx.manifest()));
    } else {
        payload["manifest"] = ctx.manifest();
        std::cout << dump_json(payload);
    }
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int run_spectrum(const std::string& config_path, const std::string& weights_flag,
                 const std::string& out_path) {
    RunContext ctx{"spectrum", config_path};
    const Config cfg = load_config(config_path);
    const std::vector<double> weights = effective_weights(weights_flag, cfg.system.n);
    ctx.options["weights"] = weights;

    const std::vector<SpectrumRecord> records =
        compute_spectrum(cfg.system, weights, cfg.solver);

    ordered_json payload = ordered_json::array();
    for (const SpectrumRecord& rec : records) {
        ordered_json row;
        row["label"] = rec.label;
        row["lambdas_rotated"] = vector_to_json(rec.lambdas_rotated);
        row["lambdas_common"] = vector_to_json(rec.lambdas_common);
        row["charges"] = vector_to_json(rec.charges);
        row["energy"] = rec.energy;
        row["residuals"] = {{"rotated", rec.residual_rotated},
                            {"common", rec.residual_common}};
        payload.push_back(row);
    }
    deliver(ctx, std::move(payload), out_path);
    return 0;
}

int run_roots(const std::string& config_path, const std::string& out_path) {
    RunContext ctx{"roots", config_path};
    const Config cfg = load_config(config_path);

    ordered_json payload = ordered_json::array();
    for (const BetheSolution& rotated : solve_all(cfg.system, cfg.solver)) {
        const BetheSolution common = shift_frame(cfg.system, rotated);
        const RootSet rs = roots_from_lambdas(cfg.system, common.lambdas);
        ordered_json row;
        row["label"] = common.label;
        row["lambdas_common"] = vector_to_json(common.lambdas);
        ordered_json roots = ordered_json::array();
        for (int p = 0; p < rs.size(); ++p)
            roots.push_back({rs.roots[p].real(), rs.roots[p].imag()});
        row["roots"] = roots;
        row["gamma_residual_max"] =
            gamma_residuals(cfg.system, rs).cwiseAbs().maxCoeff();
        payload.push_back(row);
    }
    deliver(ctx, std::move(payload), out_path);
    return 0;
}

Eigen::VectorXcd state_lambdas(const Config& cfg, const std::string& lambdas_flag,
                               int label, const char* side) {
    if (!lambdas_flag.empty()) {
        const std::vector<double> values = parse_double_list(lambdas_flag);
        if (static_cast<int>(values.size()) != cfg.system.n)
            raise(errc::config_error, std::string("need n Lambdas for ") + side);
        Eigen::VectorXcd lam(cfg.system.n);
        for (int i = 0; i < cfg.system.n; ++i) lam[i] = values[i];
        return lam;
    }
    if (label < 0)
        raise(errc::config_error,
              std::string("give either Lambdas or a label for ") + side);
    const std::vector<BetheSolution> sols = solve_all(cfg.system, cfg.solver);
    if (label >= static_cast<int>(sols.size()))
        raise(errc::config_error, "label out of range");
    return shift_frame(cfg.system, sols[label]).lambdas.cast<Complex>();
}

int run_overlap(const std::string& config_path, const std::string& lam_a_flag,
                const std::string& lam_b_flag, int label_a, int label_b,
                const std::string& out_path) {
    RunContext ctx{"overlap", config_path};
    const Config cfg = load_config(config_path);
    ctx.options["lam_a"] = lam_a_flag;
    ctx.options["lam_b"] = lam_b_flag;
    ctx.options["label_a"] = label_a;
    ctx.options["label_b"] = label_b;

    const Eigen::VectorXcd lam_a = state_lambdas(cfg, lam_a_flag, label_a, "side a");
    const Eigen::VectorXcd lam_b = state_lambdas(cfg, lam_b_flag, label_b, "side b");
    ordered_json payload = value_to_json(determinant_overlap(cfg.system, lam_a, lam_b));
    deliver(ctx, std::move(payload), out_path);
    return 0;
}

int run_project(const std::string& config_path, const std::string& lambdas_flag,
                int label, const std::string& up_flag, const std::string& out_path) {
    RunContext ctx{"project", config_path};
    const Config cfg = load_config(config_path);
    ctx.options["lambdas"] = lambdas_flag;
    ctx.options["label"] = label;
    ctx.options["up"] = up_flag;

    const Eigen::VectorXcd lam = state_lambdas(cfg, lambdas_flag, label, "the state");
    const std::vector<int> up_set = parse_index_list(up_flag);
    ordered_json payload = value_to_json(canonical_projection(cfg.system, lam, up_set));
    deliver(ctx, std::move(payload), out_path);
    return 0;
}

int run_verify(const std::string& config_path, int nmax, double perturb,
               const std::string& out_path) {
    RunContext ctx{"verify", config_path};
    if (nmax < 1 || nmax > 10) raise(errc::config_error, "nmax must be in [1, 10]");
    const Config cfg = load_config(config_path);
    ctx.options["nmax"] = nmax;
    ctx.options["perturb"] = perturb;

    bool pass = true;
    ordered_json report;

    // Single-spin closed forms: Lambda = -Bz +- |B|, r = -+ |B|/2.
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        double lambda_err = 0.0, charge_err = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::array<double, 3> b{dist(rng), dist(rng), dist(rng)};
            if (b[0] * b[0] + b[1] * b[1] + b[2] * b[2] < 1e-2) b[2] += 1.0;
            const SpinSystem one = build_system({0.0}, b);
            const FieldParams fp = field_params(one);
            for (const BetheSolution& rotated : solve_all(one, cfg.solver)) {
                const BetheSolution common = shift_frame(one, rotated);
                const double expected_lambda =
                    rotated.label ? -fp.b_z - fp.b_mag : -fp.b_z + fp.b_mag;
                const double expected_charge =
                    rotated.label ? 0.5 * fp.b_mag : -0.5 * fp.b_mag;
                lambda_err = std::max(
                    lambda_err, std::abs(common.lambdas[0] - expected_lambda));
                charge_err = std::max(charge_err,
                                      std::abs(charge_eigenvalues(one, common)[0] -
                                               expected_charge));
            }
        }
        const bool ok = lambda_err < kTolSingleSpin && charge_err < kTolSingleSpin;
        report["single_spin"] = {{"max_lambda_error", lambda_err},
                                 {"max_charge_error", charge_err},
                                 {"tolerance", kTolSingleSpin},
                                 {"pass", ok}};
        pass = pass && ok;
    }

    if (cfg.system.n > nmax) {
        report["system"] = {{"n", cfg.system.n}, {"skipped", true}};
    } else {
        const SpinSystem& sys = cfg.system;
        const FieldParams fp = field_params(sys);
        const std::vector<double> weights = generic_weights(sys.n);

        std::vector<SpectrumRecord> records =
            compute_spectrum(sys, weights, cfg.solver);
        if (perturb != 0.0) {
            for (SpectrumRecord& rec : records) {
                rec.lambdas_common.array() += perturb;
                BetheSolution corrupted{Frame::common, rec.lambdas_common, rec.label,
                                        0.0};
                rec.charges = charge_eigenvalues(sys, corrupted);
                rec.residual_common =
                    residual_common(sys, rec.lambdas_common).lpNorm<Eigen::Infinity>();
            }
        }

        double max_res_rot = 0.0, max_res_com = 0.0, max_sum_rule = 0.0;
        std::vector<Eigen::VectorXd> analytic;
        for (const SpectrumRecord& rec : records) {
            max_res_rot = std::max(max_res_rot, rec.residual_rotated);
            max_res_com = std::max(max_res_com, rec.residual_common);
            const double m = rec.charges.sum() / fp.b_mag;
            max_sum_rule = std::max(
                max_sum_rule, std::abs(m - std::round(2.0 * m) / 2.0) * fp.b_mag);
            analytic.push_back(rec.charges);
        }

        bool hermitian = true;
        double max_comm = 0.0;
        std::vector<SparseOp> charges;
        for (int k = 0; k < sys.n; ++k) charges.push_back(conserved_charge(sys, k));
        for (int i = 0; i < sys.n; ++i) {
            hermitian = hermitian && is_hermitian(charges[i]);
            for (int j = i + 1; j < sys.n; ++j)
                max_comm = std::max(max_comm, commutator_norm(charges[i], charges[j]));
        }

        std::vector<Eigen::VectorXd> reference;
        for (const EdState& state : ed_reference(sys, weights).states)
            reference.push_back(state.charges);
        const ChargeMatch match = match_charge_vectors(analytic, reference);

        int worst_label = -1;
        double worst_distance = -1.0;
        for (std::size_t s = 0; s < analytic.size(); ++s) {
            const double d = (analytic[s] - reference[match.ed_index[s]]).norm();
            if (d > worst_distance) {
                worst_distance = d;
                worst_label = static_cast<int>(records[s].label);
            }
        }

        const bool ok = match.max_distance < kTolMatch && max_comm < kTolCommutator &&
                        max_res_rot < kTolResidual && max_res_com < kTolResidual &&
                        max_sum_rule < kTolSumRule && hermitian;
        report["system"] = {{"n", sys.n},
                            {"skipped", false},
                            {"max_match_distance", match.max_distance},
                            {"worst_label", worst_label},
                            {"max_commutator_norm", max_comm},
                            {"max_residual_rotated", max_res_rot},
                            {"max_residual_common", max_res_com},
                            {"max_sum_rule_error", max_sum_rule},
                            {"hermitian", hermitian},
                            {"tolerances",
                             {{"match", kTolMatch},
                              {"commutator", kTolCommutator},
                              {"residual", kTolResidual},
                              {"sum_rule", kTolSumRule}}},
                            {"pass", ok}};
        pass = pass && ok;
    }

    report["pass"] = pass;
    deliver(ctx, std::move(report), out_path);
    return pass ? 0 : 4;
}

int run_quench(const std::string& config_path, const std::string& initial_bits,
               const std::string& weights_flag, const std::string& observable_flag,
               double t0, double tmax, int steps, bool check,
               const std::string& out_path) {
    RunContext ctx{"quench", config_path};
    const Config cfg = load_config(config_path);
    const SpinSystem& sys = cfg.system;

    QuenchSpec spec;
    spec.initial_up_set = parse_bit_string(initial_bits, sys.n);
    spec.weights = effective_weights(weights_flag, sys.n);
    std::tie(spec.observable, spec.site) = parse_observable(observable_flag);
    spec.t0 = t0;
    spec.t1 = tmax;
    spec.steps = steps;
    if (steps < 1) raise(errc::config_error, "steps must be >= 1");

    if (field_params(sys).b_perp_sq == 0.0)
        raise(errc::zero_in_plane_field, "quench expansion needs |B_perp| > 0");

    ctx.options["initial"] = initial_bits;
    ctx.options["weights"] = spec.weights;
    ctx.options["observable"] = observable_flag;
    ctx.options["t0"] = t0;
    ctx.options["tmax"] = tmax;
    ctx.options["steps"] = steps;
    ctx.options["check"] = check;

    const EigenExpansion expansion = eigen_expand(
        sys, spec.initial_up_set, spec.weights, solve_all(sys, cfg.solver), cfg.solver);
    const std::vector<double> series = evolve_observable(sys, spec, expansion);

    std::ostringstream csv;
    csv << "t,value\n";
    const double dt = steps > 1 ? (tmax - t0) / (steps - 1) : 0.0;
    for (int j = 0; j < steps; ++j)
        csv << format_double(t0 + dt * j) << "," << format_double(series[j]) << "\n";
    write_text_file(out_path, csv.str());
    ctx.outputs.push_back(out_path);

    ordered_json extras;
    extras["sum_sq_deviation"] = std::abs(expansion.sum_sq - 1.0);
    extras["projection_check"] = expansion.projection_check;

    bool check_pass = true;
    if (check) {
        FockVector psi0;
        psi0.amplitudes = Eigen::VectorXcd::Zero(sys.dim());
        std::size_t mask = 0;
        for (const int site : spec.initial_up_set) mask |= std::size_t{1} << site;
        psi0.amplitudes[static_cast<Eigen::Index>(mask)] = 1.0;

        SparseOp obs;
        {
            const SparseOp sp = local_operator(sys, LocalKind::raise, spec.site);
            const SparseOp sm = local_operator(sys, LocalKind::lower, spec.site);
            if (spec.observable == ObservableKind::sz)
                obs = local_operator(sys, LocalKind::z, spec.site);
            else if (spec.observable == ObservableKind::sx)
                obs = SparseOp(Complex(0.5) * SparseOp(sp + sm));
            else
                obs = SparseOp(Complex(0.0, -0.5) * SparseOp(sp - sm));
        }
        double max_dev = 0.0;
        for (int j = 0; j < steps; ++j) {
            const double t = t0 + dt * j;
            const FockVector psi = direct_propagate(sys, spec.weights, psi0, t);
            const double oracle = psi.amplitudes.dot(obs * psi.amplitudes).real();
            max_dev = std::max(max_dev, std::abs(series[j] - oracle));
        }
        check_pass = max_dev < kTolQuenchCheck;
        extras["check"] = {{"max_deviation", max_dev},
                           {"tolerance", kTolQuenchCheck},
                           {"pass", check_pass}};
    }

    ordered_json manifest = ctx.manifest();
    manifest["quench"] = extras;
    write_text_file(out_path + ".manifest.json", dump_json(manifest));
    return check_pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaudin magnet solver: quadratic Bethe equations, determinant "
                 "scalar products and quench dynamics for spin-1/2 systems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, weights_flag;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd, bool out_required) {
        cmd->add_option("--config", config_path, "JSON problem definition")->required();
        auto* out = cmd->add_option("--out", out_path, "output file path");
        if (out_required) out->required();
        cmd->add_option("--threads", threads, "OpenMP thread count");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "solve all 2^n eigenstates");
    add_common(spectrum, true);
    spectrum->add_option("--weights", weights_flag, "comma list of charge weights");

    CLI::App* verify = app.add_subcommand("verify", "run the ED cross-check suite");
    int nmax = 8;
    double perturb = 0.0;
    add_common(verify, false);
    verify->add_option("--nmax", nmax, "largest system size to verify (<= 10)");
    verify->add_option("--perturb", perturb, "corrupt Lambdas to prove detection");

    CLI::App* roots_cmd = app.add_subcommand("roots", "reconstruct Bethe roots");
    add_common(roots_cmd, true);

    CLI::App* overlap_cmd =
        app.add_subcommand("overlap", "determinant scalar product of two states");
    std::string lam_a_flag, lam_b_flag;
    int label_a = -1, label_b = -1;
    add_common(overlap_cmd, false);
    overlap_cmd->add_option("--lam-a", lam_a_flag, "comma list of Lambdas, bra side");
    overlap_cmd->add_option("--lam-b", lam_b_flag, "comma list of Lambdas, ket side");
    overlap_cmd->add_option("--label-a", label_a, "solved-state label, bra side");
    overlap_cmd->add_option("--label-b", label_b, "solved-state label, ket side");

    CLI::App* project = app.add_subcommand("project", "canonical-basis projection");
    std::string lambdas_flag, up_flag;
    int label = -1;
    add_common(project, false);
    project->add_option("--lambdas", lambdas_flag, "comma list of Lambdas");
    project->add_option("--label", label, "solved-state label");
    project->add_option("--up", up_flag, "comma list of up-spin sites");

    CLI::App* quench = app.add_subcommand("quench", "canonical-state quench series");
    std::string initial_bits, observable_flag = "sz:0";
    double t0 = 0.0, tmax = 10.0;
    int steps = 101;
    bool check = false;
    add_common(quench, true);
    quench->add_option("--initial", initial_bits, "0/1 string, one bit per site")
        ->required();
    quench->add_option("--weights", weights_flag, "comma list of charge weights");
    quench->add_option("--observable", observable_flag, "sz:i, sx:i or sy:i");
    quench->add_option("--t0", t0, "first time");
    quench->add_option("--tmax", tmax, "last time");
    quench->add_option("--steps", steps, "grid points");
    quench->add_flag("--check", check, "compare against direct propagation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        apply_threads(threads);
        if (spectrum->parsed()) return run_spectrum(config_path, weights_flag, out_path);
        if (verify->parsed()) return run_verify(config_path, nmax, perturb, out_path);
        if (roots_cmd->parsed()) return run_roots(config_path, out_path);
        if (overlap_cmd->parsed())
            return run_overlap(config_path, lam_a_flag, lam_b_flag, label_a, label_b,
                               out_path);
        if (project->parsed())
            return run_project(config_path, lambdas_flag, label, up_flag, out_path);
        if (quench->parsed())
            return run_quench(config_path, initial_bits, weights_flag, observable_flag,
                              t0, tmax, steps, check, out_path);
    } catch (const Error& e) {
        print_error(e.code(), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        print_error(errc::config_error, e.what());
        return 2;
    }
    return 2;
}
