#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace vallab::suites {

using json = nlohmann::json;

extern const std::vector<std::string> kSuiteNames;

/// Batch-suite configuration; everything needed to replay a run is echoed
/// into the report.
struct SuiteConfig {
    std::string suite;
    json space;  // resolved space JSON (inline or loaded from file)
    json kernel; // optional kernel JSON
    json norm;   // optional norm JSON
    std::uint64_t seed = 7;
    long trials = 100;
    double tol = 0.0; // <= 0 selects the per-suite default (1e-10 algebraic,
                      // 1e-6 for optimization-backed suites)
    std::vector<double> lambda_grid; // optional; default per suite
    double p = 2.0;                  // growth-bound exponent
    double delta = 0.5;              // boundedness probe
    double q = 2.0;                  // boundedness probe
    long n_param = 0;                // c0-series N / tent n_blocks (0 = default)
    std::string output;              // report path; empty = stdout only
    bool csv = false;
};

struct SuiteReport {
    std::string suite;
    SuiteConfig config;
    bool pass = false;
    double max_defect = 0.0;
    json details; // witnesses and suite-specific data
    double wall_time_s = 0.0;
};

/// Executes the named suite. Deterministic: identical (suite, seed, space,
/// trials) produce byte-identical max_defect. Throws InvalidInput for
/// unknown suites or malformed configs.
SuiteReport run_suite(const SuiteConfig& config);

/// Reruns the config embedded in a report; the caller compares max_defect
/// bit-exactly. Throws InvalidInput on schema mismatch.
SuiteReport replay(const json& report);

json report_to_json(const SuiteReport& report);
SuiteConfig config_from_json(const json& j);
std::string report_to_csv(const SuiteReport& report);

/// "uniform:N" / "uniform:N:MASS" shorthands or a JSON file path.
json resolve_space_arg(const std::string& arg);
/// "power:p[:scale]" / "signed_power:p[:scale]" / "linear[:scale]" /
/// "sine[:amplitude[:frequency]]" shorthands or a JSON file path.
json resolve_kernel_arg(const std::string& arg);
/// "lp:p" / "sup" / "orlicz:power_p:p" / "orlicz:exp_minus_one" or a path.
json resolve_norm_arg(const std::string& arg);
/// "min:max:steps" -> node list (0 snapped in when bracketed).
std::vector<double> parse_lambda_grid(const std::string& arg);

} // namespace vallab::suites
