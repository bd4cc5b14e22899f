#include "vallab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "vallab/decomposition.hpp"
#include "vallab/errors.hpp"
#include "vallab/json_io.hpp"
#include "vallab/numeric.hpp"
#include "vallab/probes.hpp"
#include "vallab/representation.hpp"
#include "vallab/rng.hpp"
#include "vallab/valuation.hpp"

namespace vallab::suites {

const std::vector<std::string> kSuiteNames = {
    "valuation-law",  "orthogonality",        "jordan",
    "recovery",       "invariance",           "growth-bound",
    "probes-c0-series", "probes-min-functional", "probes-tent-kernel",
    "probes-boundedness"};

namespace {

using vallab::io::json;

LatticeFunction random_function(Rng& rng, std::size_t n, double lo, double hi) {
    LatticeFunction f = LatticeFunction::zeros(n);
    for (auto& x : f.values) x = rng.next_in(lo, hi);
    return f;
}

LatticeFunction random_grid_valued(Rng& rng, std::size_t n, const std::vector<double>& grid) {
    LatticeFunction f = LatticeFunction::zeros(n);
    for (auto& x : f.values) x = grid[rng.next_index(grid.size())];
    return f;
}

// Disjoint pair with exact zeros: each atom goes to f's support, g's
// support, or neither.
std::pair<LatticeFunction, LatticeFunction> random_disjoint_pair(Rng& rng, std::size_t n,
                                                                 double lo, double hi) {
    LatticeFunction f = LatticeFunction::zeros(n);
    LatticeFunction g = LatticeFunction::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng.next_index(3)) {
            case 0: f[i] = rng.next_in(lo, hi); break;
            case 1: g[i] = rng.next_in(lo, hi); break;
            default: break;
        }
    }
    return {std::move(f), std::move(g)};
}

struct Context {
    MeasureSpace space;
    Kernel kernel;
    Valuation valuation;
    double value_lo = -2.0;
    double value_hi = 2.0;
};

json default_space_json() {
    return io::space_to_json(MeasureSpace::uniform_grid(256, 1.0));
}

json default_kernel_json() {
    return json{{"closed_form", "power"}, {"params", {{"p", 2.0}, {"scale", 1.0}}}};
}

Context make_context(const SuiteConfig& config) {
    MeasureSpace space = io::space_from_json(config.space);
    Kernel kernel = io::kernel_from_json(config.kernel, space.atom_count());
    if (kernel.atom_count() != space.atom_count())
        throw InvalidInput("suite config: kernel/space atom counts differ");
    Valuation v = kernel_valuation(kernel, space);
    Context ctx{std::move(space), std::move(kernel), std::move(v)};
    if (ctx.kernel.is_table()) {
        ctx.value_lo = ctx.kernel.lambda_grid().front();
        ctx.value_hi = ctx.kernel.lambda_grid().back();
    }
    return ctx;
}

std::vector<double> suite_lambda_grid(const SuiteConfig& config) {
    if (!config.lambda_grid.empty()) return config.lambda_grid;
    return lambda_linspace(-2.0, 2.0, 41);
}

void track(double defect, const std::vector<LatticeFunction>& witness, SuiteReport& report) {
    if (defect > report.max_defect) {
        report.max_defect = defect;
        json w = json::array();
        for (const auto& f : witness) w.push_back(io::function_to_json(f));
        report.details["witness"] = std::move(w);
    }
}

void run_valuation_law(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const LatticeFunction f =
            random_function(rng, ctx.space.atom_count(), ctx.value_lo, ctx.value_hi);
        const LatticeFunction g =
            random_function(rng, ctx.space.atom_count(), ctx.value_lo, ctx.value_hi);
        const double scale = 1.0 + std::abs(ctx.valuation(f)) + std::abs(ctx.valuation(g));
        track(valuation_defect(ctx.valuation, f, g) / scale, {f, g}, report);
    }
}

void run_orthogonality(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const auto [f, g] =
            random_disjoint_pair(rng, ctx.space.atom_count(), ctx.value_lo, ctx.value_hi);
        const double scale = 1.0 + std::abs(ctx.valuation(f)) + std::abs(ctx.valuation(g));
        track(orthogonality_defect(ctx.valuation, f, g) / scale, {f, g}, report);
    }
}

void run_jordan(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    const JordanPair pair = jordan_decompose(ctx.valuation, ctx.space);
    const double hi = std::max(ctx.value_hi, 0.0);
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const LatticeFunction f = random_function(rng, ctx.space.atom_count(), 0.0, hi);
        const LatticeFunction g = random_function(rng, ctx.space.atom_count(), 0.0, hi);
        const double vp_f = pair.positive(f);
        const double vm_f = pair.negative(f);
        const double v_f = ctx.valuation(f);
        const double scale = 1.0 + std::abs(v_f);
        track(std::max(0.0, -vp_f), {f}, report);
        track(std::max(0.0, -vm_f), {f}, report);
        track(std::abs((vp_f - vm_f) - v_f) / scale, {f}, report);
        const double pscale = 1.0 + std::abs(vp_f) + std::abs(pair.positive(g));
        track(valuation_defect(pair.positive, f, g) / pscale, {f, g}, report);
    }
}

void run_recovery(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    const std::vector<double> grid = suite_lambda_grid(config);
    const Kernel recovered = recover_kernel(ctx.valuation, grid, ctx.space);
    std::vector<LatticeFunction> samples;
    samples.reserve(static_cast<std::size_t>(config.trials));
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        samples.push_back(random_grid_valued(rng, ctx.space.atom_count(), recovered.lambda_grid()));
    }
    const DefectReport rt = roundtrip_check(ctx.valuation, recovered, ctx.space, samples);
    track(rt.max_defect, rt.witness, report);
    report.details["lambda_grid"] = recovered.lambda_grid();
}

void run_invariance(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    std::vector<double> lambdas;
    for (double l : suite_lambda_grid(config))
        if (l != 0.0) lambdas.push_back(l);
    const DefectReport r =
        invariance_check(ctx.valuation, lambdas, ctx.space, config.trials, config.seed);
    track(r.max_defect, r.witness, report);
}

void run_growth_bound(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    const std::vector<double> grid = suite_lambda_grid(config);
    const ThetaRecovery rec = recover_theta(ctx.valuation, grid, ctx.space);
    track(rec.cross_reference_gap, {}, report);

    const bool finite = !ctx.space.mass_declared_infinite();
    const GrowthBound bound = fit_growth_bound(rec.theta, config.p, finite);
    double envelope_violation = 0.0;
    for (std::size_t j = 0; j < rec.theta.lambda_grid.size(); ++j) {
        const double cap =
            bound.a * std::pow(std::abs(rec.theta.lambda_grid[j]), bound.p) + bound.b;
        envelope_violation =
            std::max(envelope_violation, std::abs(rec.theta.values[j]) - cap);
    }
    track(std::max(0.0, envelope_violation), {}, report);

    // Reconstruction through theta on grid-valued samples.
    const Valuation reconstructed = theta_valuation(
        [theta = rec.theta](double l) { return l == 0.0 ? 0.0 : theta.eval(l); }, ctx.space,
        "theta-reconstructed");
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const LatticeFunction f =
            random_grid_valued(rng, ctx.space.atom_count(), rec.theta.lambda_grid);
        const double scale = 1.0 + std::abs(ctx.valuation(f));
        track(std::abs(ctx.valuation(f) - reconstructed(f)) / scale, {f}, report);
    }
    report.details["growth_bound"] =
        json{{"a", bound.a}, {"b", bound.b}, {"p", bound.p}, {"finite_measure", bound.finite_measure}};
}

void run_probes_c0_series(const SuiteConfig& config, SuiteReport& report) {
    const long n = config.n_param > 0 ? config.n_param : 30;
    const long terms = std::max<long>(n, 50);
    const probes::SeriesValuation series(std::max<long>(terms, 50));

    json basis_values = json::array();
    for (long k = 1; k <= n; ++k) {
        LatticeFunction e = LatticeFunction::zeros(static_cast<std::size_t>(terms));
        e[static_cast<std::size_t>(k - 1)] = 1.0;
        const double value = series.value(e);
        basis_values.push_back(value);
        track(std::abs(value - static_cast<double>(k)), {e}, report);
    }
    report.details["basis_values"] = std::move(basis_values);

    // Partial sums at eps = 1/2 against the independent oracle, plus the
    // discrepancy flag for the printed closed form.
    const probes::SeriesIdentityProbe probe = probes::series_identity_probe(0.5, 50);
    LatticeFunction half = LatticeFunction::zeros(50);
    for (auto& x : half.values) x = 0.5;
    track(std::abs(series.value(half) - probe.partial_sum), {half}, report);
    track(std::abs(probe.partial_sum - probe.oracle_closed_form), {half}, report);
    report.details["series_identity"] =
        json{{"epsilon", probe.epsilon},
             {"terms", probe.terms},
             {"partial_sum", probe.partial_sum},
             {"oracle_closed_form", probe.oracle_closed_form},
             {"printed_closed_form", probe.printed_closed_form},
             {"printed_formula_discrepant", probe.printed_formula_discrepant}};
}

void run_probes_min_functional(const SuiteConfig& config, SuiteReport& report) {
    const auto [f, g] = probes::two_block_witness(8, 8);
    const Valuation phi = opaque_valuation(
        "min-functional", f.size(),
        [](const LatticeFunction& x) { return probes::min_functional(x); });
    const double witness_defect = valuation_defect(phi, f, g);
    track(std::abs(witness_defect - 1.0), {f, g}, report);
    report.details["two_block_valuation_defect"] = witness_defect;

    const DefectReport connected =
        probes::connected_disjoint_additivity_suite(64, config.trials, config.seed);
    track(connected.max_defect, connected.witness, report);
    report.details["connected_orthogonality_defect"] = connected.max_defect;
}

void run_probes_tent_kernel(const SuiteConfig& config, SuiteReport& report) {
    const int n_blocks = config.n_param > 0 ? static_cast<int>(config.n_param) : 12;
    const probes::TentModel model = probes::tent_kernel_phi_n(n_blocks);
    const Valuation v = kernel_valuation(model.kernel, model.space, "tent");

    const double cap = 1.0 - std::ldexp(1.0, -n_blocks); // sum of peak masses
    double max_value = 0.0;
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const LatticeFunction f = random_function(rng, model.space.atom_count(), 0.0, 6.0);
        const double value = v(f);
        if (value > max_value) max_value = value;
        track(std::max(0.0, value - cap), {f}, report);
    }
    double max_peak = 0.0;
    for (int n = 1; n <= n_blocks; ++n) {
        const double peak = model.kernel.eval(static_cast<std::size_t>(n - 1), 2.0);
        max_peak = std::max(max_peak, peak);
        track(std::abs(peak - std::ldexp(1.0, n)), {}, report);
    }
    report.details["max_sampled_value"] = max_value;
    report.details["value_cap"] = cap;
    report.details["max_kernel_at_2"] = max_peak;
}

void run_probes_boundedness(const SuiteConfig& config, SuiteReport& report) {
    Context ctx = make_context(config);
    const NormSpec spec = config.norm.is_null() ? NormSpec::lp(2.0) : io::norm_from_json(config.norm);

    json certs = json::array();
    auto check = [&](const LatticeFunction& f) {
        const probes::BoundednessCertificate cert = probes::boundedness_certificate(
            ctx.valuation, f, config.delta, config.q, spec, ctx.space);
        track(std::max(0.0, cert.achieved - cert.bound), {f}, report);
        track(cert.reconstruction_gap, {f}, report);
        for (const auto& piece : cert.pieces) {
            const double piece_norm = norm(ctx.space, restrict_to(f, piece), spec);
            track(std::max(0.0, piece_norm - config.delta), {f}, report);
        }
        certs.push_back(json{{"pieces", cert.pieces.size()},
                             {"norm_f", cert.norm_f},
                             {"bound", cert.bound},
                             {"achieved", cert.achieved},
                             {"slack", cert.slack},
                             {"reconstruction_gap", cert.reconstruction_gap},
                             {"calibration_ok", cert.calibration_ok}});
    };

    check(LatticeFunction::constant(ctx.space.atom_count(), 1.0));
    for (long t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        check(random_function(rng, ctx.space.atom_count(), 0.5, 1.5));
    }
    report.details["certificates"] = std::move(certs);
}

} // namespace

SuiteReport run_suite(const SuiteConfig& config_in) {
    SuiteConfig config = config_in;
    if (config.trials < 1) throw InvalidInput("suite config: trials must be >= 1");
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), config.suite) == kSuiteNames.end())
        throw InvalidInput("unknown suite '" + config.suite + "'");
    if (config.tol <= 0.0) {
        // jordan is backed by the 1-D scan optimizer; everything else is
        // algebraic.
        config.tol = config.suite == "jordan" ? 1e-6 : 1e-10;
    }
    if (!std::isfinite(config.tol)) throw InvalidInput("suite config: tol must be finite");
    if (config.space.is_null()) config.space = default_space_json();
    if (config.kernel.is_null()) config.kernel = default_kernel_json();
    if (config.norm.is_null()) config.norm = json{{"variant", "lp"}, {"p", 2.0}};

    SuiteReport report;
    report.suite = config.suite;
    report.config = config;
    report.details = json::object();

    const auto start = std::chrono::steady_clock::now();
    if (config.suite == "valuation-law")
        run_valuation_law(config, report);
    else if (config.suite == "orthogonality")
        run_orthogonality(config, report);
    else if (config.suite == "jordan")
        run_jordan(config, report);
    else if (config.suite == "recovery")
        run_recovery(config, report);
    else if (config.suite == "invariance")
        run_invariance(config, report);
    else if (config.suite == "growth-bound")
        run_growth_bound(config, report);
    else if (config.suite == "probes-c0-series")
        run_probes_c0_series(config, report);
    else if (config.suite == "probes-min-functional")
        run_probes_min_functional(config, report);
    else if (config.suite == "probes-tent-kernel")
        run_probes_tent_kernel(config, report);
    else if (config.suite == "probes-boundedness")
        run_probes_boundedness(config, report);
    const auto stop = std::chrono::steady_clock::now();

    report.wall_time_s = std::chrono::duration<double>(stop - start).count();
    report.pass = report.max_defect <= config.tol;
    return report;
}

json report_to_json(const SuiteReport& report) {
    json config{{"suite", report.config.suite},
                {"space", report.config.space},
                {"kernel", report.config.kernel},
                {"norm", report.config.norm},
                {"seed", report.config.seed},
                {"trials", report.config.trials},
                {"tol", report.config.tol},
                {"lambda_grid", report.config.lambda_grid},
                {"p", report.config.p},
                {"delta", report.config.delta},
                {"q", report.config.q},
                {"n_param", report.config.n_param}};
    return json{{"suite", report.suite},
                {"config", std::move(config)},
                {"pass", report.pass},
                {"max_defect", report.max_defect},
                {"details", report.details},
                {"wall_time_s", report.wall_time_s}};
}

SuiteConfig config_from_json(const json& j) {
    if (!j.is_object() || !j.contains("suite"))
        throw InvalidInput("config JSON: missing suite name");
    SuiteConfig config;
    config.suite = j["suite"].get<std::string>();
    config.space = j.value("space", json());
    config.kernel = j.value("kernel", json());
    config.norm = j.value("norm", json());
    config.seed = j.value("seed", static_cast<std::uint64_t>(7));
    config.trials = j.value("trials", 100L);
    config.tol = j.value("tol", 0.0);
    if (j.contains("lambda_grid")) config.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    config.p = j.value("p", 2.0);
    config.delta = j.value("delta", 0.5);
    config.q = j.value("q", 2.0);
    config.n_param = j.value("n_param", 0L);
    return config;
}

SuiteReport replay(const json& report) {
    if (!report.is_object() || !report.contains("config"))
        throw InvalidInput("replay: report has no config echo");
    return run_suite(config_from_json(report["config"]));
}

std::string report_to_csv(const SuiteReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "suite,pass,max_defect,seed,trials,tol,wall_time_s\n";
    out << report.suite << "," << (report.pass ? 1 : 0) << "," << report.max_defect << ","
        << report.config.seed << "," << report.config.trials << "," << report.config.tol << ","
        << report.wall_time_s << "\n";
    return out.str();
}

namespace {

std::vector<std::string> split_colon(const std::string& arg) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(arg);
    while (std::getline(in, token, ':')) parts.push_back(token);
    return parts;
}

bool looks_like_file(const std::string& arg) {
    return arg.find(".json") != std::string::npos || arg.find('/') != std::string::npos;
}

} // namespace

json resolve_space_arg(const std::string& arg) {
    const auto parts = split_colon(arg);
    if (!parts.empty() && parts[0] == "uniform") {
        if (parts.size() < 2) throw InvalidInput("space shorthand: uniform:N[:MASS]");
        const std::size_t n = static_cast<std::size_t>(std::stoull(parts[1]));
        const double mass = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
        return io::space_to_json(MeasureSpace::uniform_grid(n, mass));
    }
    return io::load_json_file(arg);
}

json resolve_kernel_arg(const std::string& arg) {
    if (looks_like_file(arg)) return io::load_json_file(arg);
    const auto parts = split_colon(arg);
    if (parts.empty()) throw InvalidInput("empty kernel argument");
    const std::string& name = parts[0];
    json params = json::object();
    if (name == "power" || name == "signed_power") {
        params["p"] = parts.size() > 1 ? std::stod(parts[1]) : 2.0;
        params["scale"] = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
    } else if (name == "linear") {
        params["scale"] = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
    } else if (name == "sine") {
        params["amplitude"] = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
        params["frequency"] = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
    } else {
        throw InvalidInput("unknown kernel shorthand '" + name + "'");
    }
    return json{{"closed_form", name}, {"params", std::move(params)}};
}

json resolve_norm_arg(const std::string& arg) {
    if (looks_like_file(arg)) return io::load_json_file(arg);
    const auto parts = split_colon(arg);
    if (parts.empty()) throw InvalidInput("empty norm argument");
    if (parts[0] == "lp")
        return json{{"variant", "lp"}, {"p", parts.size() > 1 ? std::stod(parts[1]) : 2.0}};
    if (parts[0] == "sup") return json{{"variant", "sup"}};
    if (parts[0] == "orlicz") {
        if (parts.size() > 1 && parts[1] == "exp_minus_one")
            return json{{"variant", "orlicz"}, {"phi", "exp_minus_one"}};
        return json{{"variant", "orlicz"},
                    {"phi", "power_p"},
                    {"p", parts.size() > 2 ? std::stod(parts[2]) : 2.0}};
    }
    throw InvalidInput("unknown norm shorthand '" + arg + "'");
}

std::vector<double> parse_lambda_grid(const std::string& arg) {
    const auto parts = split_colon(arg);
    if (parts.size() != 3) throw InvalidInput("lambda grid: expected min:max:steps");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const std::size_t steps = static_cast<std::size_t>(std::stoull(parts[2]));
    return lambda_linspace(lo, hi, steps);
}

} // namespace vallab::suites
