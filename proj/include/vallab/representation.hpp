#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vallab/kernel.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"
#include "vallab/valuation.hpp"

namespace vallab {

/// Sampled continuous theta with theta(0) = 0; linear interpolation between
/// nodes, no extrapolation.
struct ThetaFunction {
    std::vector<double> lambda_grid;
    std::vector<double> values;

    double eval(double lambda) const;
};

struct GrowthBound {
    double a = 0.0;
    double b = 0.0;
    double p = 1.0;
    bool finite_measure = true;
};

/// nu_lambda(A) = V(lambda * chi_A).
double nu_lambda(const Valuation& v, double lambda, const MeasurableSet& a);

/// Table kernel with K(lambda, t_i) = V(lambda chi_{t_i}) / mu_i; the
/// Radon-Nikodym derivative of nu_lambda degenerates to this ratio on
/// atoms. 0 is inserted into the grid if missing and K(0, .) forced to 0.
/// If V is not orthogonally additive the result simply fails roundtrip_check.
Kernel recover_kernel(const Valuation& v, std::vector<double> lambda_grid,
                      const MeasureSpace& space);

/// Max over samples of |V(f) - sum_i K(f_i, t_i) mu_i|.
DefectReport roundtrip_check(const Valuation& v, const Kernel& kernel,
                             const MeasureSpace& space,
                             const std::vector<LatticeFunction>& samples);

struct ChunkedRecoveryResult {
    Kernel kernel;
    double consistency_gap = 0.0;            // max cross-chunk disagreement
    std::vector<double> exhaustion_gaps;     // per sample: |V(f chi_{Omega_last}) - V(f)|
    std::vector<std::vector<double>> chunk_partial_values; // per sample, V(f chi_{Omega_n})
};

/// Per-chunk recovery K_n on the prefixes Omega_n extended by zero, checked
/// for mutual consistency (gap beyond 1e-12 throws: the valuation is not
/// orthogonally additive), plus the chunk-exhaustion verification
/// V(f chi_{Omega_n}) -> V(f) on the given samples.
ChunkedRecoveryResult chunked_recovery(const Valuation& v, std::vector<double> lambda_grid,
                                       const MeasureSpace& space,
                                       const std::vector<LatticeFunction>& samples);

/// Change of density: K~(lambda, t) = K(lambda g(t), t) / g(t) with weights
/// mu~_i = g_i mu_i; the transformed valuation satisfies V~(f/g) = V(f).
std::pair<Kernel, MeasureSpace> density_transform(const Kernel& kernel,
                                                  const LatticeFunction& g,
                                                  const MeasureSpace& space);

/// Phi(f)_i = K(f_i, t_i); the L1 factor. Locality Phi(f chi_A) =
/// Phi(f) chi_A is exact because K(0, .) = 0.
LatticeFunction l1_factor(const Kernel& kernel, const LatticeFunction& f);

struct ProportionalityResult {
    double c = 0.0;
    double max_gap = 0.0;
};

/// Estimates c = nu(Omega)/mu(Omega) and reports the max over sampled sets
/// of |nu(A) - c mu(A)|. Requires a uniform non-atomic surrogate grid.
ProportionalityResult proportionality_check(
    const std::function<double(const MeasurableSet&)>& nu, const MeasureSpace& space,
    long trials, std::uint64_t seed);

/// Max over sampled lambda and equal-measure pairs (A, A') of
/// |V(lambda chi_A) - V(lambda chi_A')|. Requires a uniform grid.
DefectReport invariance_check(const Valuation& v, const std::vector<double>& lambdas,
                              const MeasureSpace& space, long trials, std::uint64_t seed);

struct ThetaRecovery {
    ThetaFunction theta;
    double cross_reference_gap = 0.0; // disagreement between the two reference sets
};

/// theta(lambda) = V(lambda chi_A) / mu(A) for a fixed reference A of
/// positive measure, cross-validated against a second reference. Caller is
/// expected to have passed invariance_check first.
ThetaRecovery recover_theta(const Valuation& v, std::vector<double> lambda_grid,
                            const MeasureSpace& space);

/// Grid-certified envelope |theta| <= a |lambda|^p + b. Finite measure:
/// b = max of |theta| on grid nodes with |lambda| <= 1, a fitted on the
/// rest; infinite measure: b = 0 and a = max |theta|/|lambda|^p over
/// nonzero nodes.
GrowthBound fit_growth_bound(const ThetaFunction& theta, double p, bool finite_measure);

} // namespace vallab
