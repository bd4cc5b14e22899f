// Batch driver: loads spaces/kernels/valuations from JSON, runs named
// property suites with seeds and tolerances, emits machine-readable reports.
//
// Exit codes: 0 pass, 1 suite failure, 2 parse/validation error, 3 internal.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vallab/decomposition.hpp"
#include "vallab/errors.hpp"
#include "vallab/json_io.hpp"
#include "vallab/numeric.hpp"
#include "vallab/representation.hpp"
#include "vallab/rng.hpp"
#include "vallab/suites.hpp"
#include "vallab/valuation.hpp"

namespace {

using nlohmann::json;
using namespace vallab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitInternal = 3;

struct CommonOpts {
    std::string space;
    std::string kernel;
    std::string norm;
    std::string lambda_grid;
    std::string out;
    std::uint64_t seed = 7;
    long trials = 100;
    double tol = 0.0; // per-suite default
    double p = 2.0;
    double delta = 0.5;
    double q = 2.0;
    long n_param = 0;
    bool csv = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--space", opts.space, "space JSON file or uniform:N[:MASS]");
    cmd->add_option("--kernel", opts.kernel,
                    "kernel JSON file or shorthand (power:p[:scale], signed_power:p[:scale], "
                    "linear[:scale], sine[:amp[:freq]])");
    cmd->add_option("--norm", opts.norm, "norm JSON file or lp:p | sup | orlicz:power_p:p");
    cmd->add_option("--lambda-grid", opts.lambda_grid, "lambda grid min:max:steps");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--trials", opts.trials, "number of trials");
    cmd->add_option("--tol", opts.tol,
                    "pass tolerance (default per suite: 1e-10 algebraic, 1e-6 jordan)");
    cmd->add_option("--out", opts.out, "report output path");
    cmd->add_flag("--csv", opts.csv, "also write a CSV summary next to --out");
}

suites::SuiteConfig build_config(const std::string& suite, const CommonOpts& opts) {
    suites::SuiteConfig config;
    config.suite = suite;
    if (!opts.space.empty()) config.space = suites::resolve_space_arg(opts.space);
    if (!opts.kernel.empty()) config.kernel = suites::resolve_kernel_arg(opts.kernel);
    if (!opts.norm.empty()) config.norm = suites::resolve_norm_arg(opts.norm);
    if (!opts.lambda_grid.empty()) config.lambda_grid = suites::parse_lambda_grid(opts.lambda_grid);
    config.seed = opts.seed;
    config.trials = opts.trials;
    config.tol = opts.tol;
    config.p = opts.p;
    config.delta = opts.delta;
    config.q = opts.q;
    config.n_param = opts.n_param;
    config.output = opts.out;
    config.csv = opts.csv;
    return config;
}

void emit_report(const suites::SuiteReport& report) {
    const json j = suites::report_to_json(report);
    std::cout << j.dump(2) << "\n";
    if (!report.config.output.empty()) {
        io::write_json_file(report.config.output, j);
        if (report.config.csv) {
            std::ofstream csv(report.config.output + ".csv");
            csv << suites::report_to_csv(report);
        }
    }
}

int run_named_suite(const std::string& suite, const CommonOpts& opts) {
    const suites::SuiteReport report = suites::run_suite(build_config(suite, opts));
    emit_report(report);
    return report.pass ? kExitPass : kExitFail;
}

json parse_inline_or_file(const std::string& arg) {
    if (!arg.empty() && arg.front() == '[') return json::parse(arg);
    return io::load_json_file(arg);
}

int run_decompose(const CommonOpts& opts, const std::string& f_arg, long grid_points) {
    if (opts.space.empty() || opts.kernel.empty())
        throw InvalidInput("decompose: --space and --kernel are required");
    const MeasureSpace space = io::space_from_json(suites::resolve_space_arg(opts.space));
    const Kernel kernel =
        io::kernel_from_json(suites::resolve_kernel_arg(opts.kernel), space.atom_count());
    const Valuation v = kernel_valuation(kernel, space);

    LatticeFunction f = f_arg.empty() ? LatticeFunction::constant(space.atom_count(), 1.0)
                                      : io::function_from_json(parse_inline_or_file(f_arg));

    const JordanPair pair = jordan_decompose(v, space);
    const double v_f = v(f);
    const double v_plus = pair.positive(f);
    const double v_minus = pair.negative(f);
    const double oracle = positive_part_bruteforce(v, f, grid_points);

    const json out{{"f", io::function_to_json(f)},
                   {"V", v_f},
                   {"V_plus", v_plus},
                   {"V_minus", v_minus},
                   {"oracle_gap", std::abs(v_plus - oracle)}};
    std::cout << out.dump(2) << "\n";
    if (!opts.out.empty()) io::write_json_file(opts.out, out);
    return kExitPass;
}

int run_recover(const CommonOpts& opts) {
    if (opts.space.empty() || opts.kernel.empty())
        throw InvalidInput("recover: --space and --kernel are required");
    const MeasureSpace space = io::space_from_json(suites::resolve_space_arg(opts.space));
    const Kernel kernel =
        io::kernel_from_json(suites::resolve_kernel_arg(opts.kernel), space.atom_count());
    const Valuation v = kernel_valuation(kernel, space);
    const std::vector<double> grid = opts.lambda_grid.empty()
                                         ? lambda_linspace(-2.0, 2.0, 41)
                                         : suites::parse_lambda_grid(opts.lambda_grid);
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-10;

    json out;
    double invariance_defect = -1.0;
    bool invariant = false;
    if (space.uniform_weights()) {
        std::vector<double> lambdas;
        for (double l : grid)
            if (l != 0.0) lambdas.push_back(l);
        const DefectReport inv = invariance_check(v, lambdas, space, opts.trials, opts.seed);
        invariance_defect = inv.max_defect;
        invariant = inv.max_defect <= tol;
    }
    out["invariance_defect"] = invariance_defect;

    const Kernel recovered = recover_kernel(v, grid, space);
    std::vector<LatticeFunction> samples;
    for (long t = 0; t < opts.trials; ++t) {
        Rng rng(Rng::derive_seed(opts.seed, static_cast<std::uint64_t>(t)));
        LatticeFunction f = LatticeFunction::zeros(space.atom_count());
        for (auto& x : f.values) x = recovered.lambda_grid()[rng.next_index(grid.size())];
        samples.push_back(std::move(f));
    }
    const DefectReport rt = roundtrip_check(v, recovered, space, samples);
    out["roundtrip_defect"] = rt.max_defect;

    if (invariant) {
        const ThetaRecovery rec = recover_theta(v, grid, space);
        const GrowthBound bound =
            fit_growth_bound(rec.theta, opts.p, !space.mass_declared_infinite());
        out["theta"] = json{{"lambda_grid", rec.theta.lambda_grid},
                            {"values", rec.theta.values},
                            {"cross_reference_gap", rec.cross_reference_gap}};
        out["growth_bound"] = json{{"a", bound.a},
                                   {"b", bound.b},
                                   {"p", bound.p},
                                   {"finite_measure", bound.finite_measure}};
    } else {
        out["kernel"] = io::kernel_to_json(recovered);
    }

    std::cout << out.dump(2) << "\n";
    if (!opts.out.empty()) io::write_json_file(opts.out, out);
    return rt.max_defect <= tol ? kExitPass : kExitFail;
}

int run_replay(const std::string& report_path, const std::string& out_path) {
    const json original = io::load_json_file(report_path);
    if (!original.contains("max_defect") || !original.contains("config"))
        throw InvalidInput("replay: not a suite report (missing max_defect/config)");
    const double original_defect = original["max_defect"].get<double>();
    suites::SuiteReport rerun = suites::replay(original);
    rerun.config.output = out_path;
    emit_report(rerun);

    const bool reproduced = rerun.max_defect == original_defect;
    std::cerr << (reproduced ? "replay: max_defect reproduced bit-exactly\n"
                             : "replay: max_defect MISMATCH\n");
    return reproduced ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"valuation laboratory: property suites for valuations on function lattices"};
    app.require_subcommand(1);

    CommonOpts verify_opts;
    std::string verify_suite_name;
    CLI::App* verify = app.add_subcommand("verify-suite", "run a named property suite");
    verify->add_option("suite", verify_suite_name, "suite name")->required();
    add_common_flags(verify, verify_opts);
    verify->add_option("--p", verify_opts.p, "growth-bound exponent");
    verify->add_option("--delta", verify_opts.delta, "boundedness delta");
    verify->add_option("--q", verify_opts.q, "boundedness q");
    verify->add_option("--n", verify_opts.n_param, "suite size parameter");

    CommonOpts dec_opts;
    std::string dec_f;
    long dec_grid_points = 1000;
    CLI::App* decompose = app.add_subcommand("decompose", "Jordan-decompose a kernel valuation");
    add_common_flags(decompose, dec_opts);
    decompose->add_option("--f", dec_f, "input function: inline JSON array or file");
    decompose->add_option("--grid-points", dec_grid_points, "brute-force oracle grid points");

    CommonOpts rec_opts;
    CLI::App* recover = app.add_subcommand("recover", "recover a kernel/theta from a valuation");
    add_common_flags(recover, rec_opts);
    recover->add_option("--p", rec_opts.p, "growth-bound exponent");

    CLI::App* probe = app.add_subcommand("probe", "run a named probe");
    probe->require_subcommand(1);
    CommonOpts c0_opts;
    CLI::App* probe_c0 = probe->add_subcommand("c0-series", "c0 series counterexample");
    probe_c0->add_option("--n", c0_opts.n_param, "basis vectors to check");
    add_common_flags(probe_c0, c0_opts);
    CommonOpts min_opts;
    CLI::App* probe_min = probe->add_subcommand("min-functional", "min functional probe");
    add_common_flags(probe_min, min_opts);
    CommonOpts tent_opts;
    CLI::App* probe_tent = probe->add_subcommand("tent-kernel", "tent kernel counterexample");
    probe_tent->add_option("--n-blocks", tent_opts.n_param, "number of tent blocks");
    add_common_flags(probe_tent, tent_opts);
    CommonOpts bound_opts;
    CLI::App* probe_bound = probe->add_subcommand("boundedness", "boundedness certificate probe");
    probe_bound->add_option("--delta", bound_opts.delta, "norm target per piece");
    probe_bound->add_option("--q", bound_opts.q, "lower q-estimate exponent");
    add_common_flags(probe_bound, bound_opts);

    std::string replay_path;
    std::string replay_out;
    CLI::App* replay_cmd = app.add_subcommand("replay", "re-run a report's embedded config");
    replay_cmd->add_option("report", replay_path, "report JSON path")->required();
    replay_cmd->add_option("--out", replay_out, "rerun report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (verify->parsed()) return run_named_suite(verify_suite_name, verify_opts);
        if (decompose->parsed()) return run_decompose(dec_opts, dec_f, dec_grid_points);
        if (recover->parsed()) return run_recover(rec_opts);
        if (probe->parsed()) {
            if (probe_c0->parsed()) return run_named_suite("probes-c0-series", c0_opts);
            if (probe_min->parsed()) return run_named_suite("probes-min-functional", min_opts);
            if (probe_tent->parsed()) return run_named_suite("probes-tent-kernel", tent_opts);
            if (probe_bound->parsed()) return run_named_suite("probes-boundedness", bound_opts);
        }
        if (replay_cmd->parsed()) return run_replay(replay_path, replay_out);
        return kExitParse;
    } catch (const ConvergenceError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
