#include "vallab/representation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"
#include "vallab/rng.hpp"

namespace vallab {

namespace {

// Sorted, deduplicated lambda grid with 0 present.
std::vector<double> normalize_lambda_grid(std::vector<double> grid) {
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) grid.push_back(1.0);
    for (double l : grid)
        if (!std::isfinite(l)) throw InvalidInput("lambda grid: nodes must be finite");
    return grid;
}

MeasurableSet singleton(std::size_t i) { return MeasurableSet(std::vector<std::size_t>{i}); }

} // namespace

double ThetaFunction::eval(double lambda) const { return interpolate_on_grid(lambda_grid, values, lambda); }

double nu_lambda(const Valuation& v, double lambda, const MeasurableSet& a) {
    return v(scaled_indicator(v.dimension(), lambda, a));
}

Kernel recover_kernel(const Valuation& v, std::vector<double> lambda_grid,
                      const MeasureSpace& space) {
    if (v.dimension() != space.atom_count())
        throw InvalidInput("recover_kernel: valuation/space size mismatch");
    const std::vector<double> grid = normalize_lambda_grid(std::move(lambda_grid));
    std::vector<std::vector<double>> table(space.atom_count(),
                                           std::vector<double>(grid.size(), 0.0));
    for (std::size_t i = 0; i < space.atom_count(); ++i) {
        const MeasurableSet atom = singleton(i);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (grid[j] == 0.0) continue; // forced: K(0, .) = 0
            table[i][j] = nu_lambda(v, grid[j], atom) / space.weight(i);
        }
    }
    return Kernel::table(grid, std::move(table));
}

DefectReport roundtrip_check(const Valuation& v, const Kernel& kernel,
                             const MeasureSpace& space,
                             const std::vector<LatticeFunction>& samples) {
    if (kernel.atom_count() != space.atom_count())
        throw InvalidInput("roundtrip_check: kernel/space size mismatch");
    DefectReport report;
    report.trials = static_cast<long>(samples.size());
    const Valuation reconstructed = kernel_valuation(kernel, space, "reconstructed");
    for (const auto& f : samples) {
        const double defect = std::abs(v(f) - reconstructed(f));
        if (defect > report.max_defect) {
            report.max_defect = defect;
            report.witness = {f};
        }
    }
    return report;
}

ChunkedRecoveryResult chunked_recovery(const Valuation& v, std::vector<double> lambda_grid,
                                       const MeasureSpace& space,
                                       const std::vector<LatticeFunction>& samples) {
    if (!space.chunked()) throw InvalidInput("chunked_recovery: space has no chunks");
    if (v.dimension() != space.atom_count())
        throw InvalidInput("chunked_recovery: valuation/space size mismatch");
    const std::vector<double> grid = normalize_lambda_grid(std::move(lambda_grid));
    const auto& prefixes = space.chunk_prefixes();

    // Per-chunk kernels K_n on the prefix Omega_n, extended by zero. The
    // restriction V_n(f) = V(f chi_{Omega_n}) evaluates singletons inside
    // the prefix, so K_n is computed exactly as on the full space.
    std::vector<std::vector<std::vector<double>>> chunk_tables;
    chunk_tables.reserve(prefixes.size());
    for (std::size_t ci = 0; ci < prefixes.size(); ++ci) {
        std::vector<std::vector<double>> table(space.atom_count(),
                                               std::vector<double>(grid.size(), 0.0));
        for (std::size_t i = 0; i < prefixes[ci]; ++i) {
            const MeasurableSet atom = singleton(i);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (grid[j] == 0.0) continue;
                const LatticeFunction restricted = restrict_to_chunk(
                    space, scaled_indicator(space.atom_count(), grid[j], atom), ci);
                table[i][j] = v(restricted) / space.weight(i);
            }
        }
        chunk_tables.push_back(std::move(table));
    }

    // Consistency K_n = K_m on Omega_n for n < m.
    double consistency_gap = 0.0;
    for (std::size_t n = 0; n + 1 < prefixes.size(); ++n) {
        for (std::size_t m = n + 1; m < prefixes.size(); ++m) {
            for (std::size_t i = 0; i < prefixes[n]; ++i)
                for (std::size_t j = 0; j < grid.size(); ++j)
                    consistency_gap = std::max(
                        consistency_gap, std::abs(chunk_tables[n][i][j] - chunk_tables[m][i][j]));
        }
    }
    if (consistency_gap > 1e-12)
        throw InvalidInput("chunked_recovery: inconsistent chunk kernels (gap " +
                           std::to_string(consistency_gap) +
                           "); the valuation is not orthogonally additive");

    ChunkedRecoveryResult result{Kernel::table(grid, chunk_tables.back()), consistency_gap, {}, {}};

    // Chunk exhaustion: V(f chi_{Omega_n}) -> V(f) along the prefixes.
    for (const auto& f : samples) {
        std::vector<double> partials;
        partials.reserve(prefixes.size());
        for (std::size_t k = 0; k < prefixes.size(); ++k)
            partials.push_back(v(restrict_to_chunk(space, f, k)));
        result.exhaustion_gaps.push_back(std::abs(partials.back() - v(f)));
        result.chunk_partial_values.push_back(std::move(partials));
    }
    return result;
}

std::pair<Kernel, MeasureSpace> density_transform(const Kernel& kernel,
                                                  const LatticeFunction& g,
                                                  const MeasureSpace& space) {
    if (kernel.atom_count() != space.atom_count() || g.size() != space.atom_count())
        throw InvalidInput("density_transform: size mismatch");
    for (double x : g.values)
        if (!(x > 0.0)) throw InvalidInput("density_transform: density must be strictly positive");

    std::vector<double> new_weights(space.atom_count());
    for (std::size_t i = 0; i < space.atom_count(); ++i) new_weights[i] = g[i] * space.weight(i);
    MeasureSpace transformed_space(std::move(new_weights), space.chunk_prefixes(),
                                   space.nonatomic_surrogate(), space.mass_declared_infinite());

    // K~ wraps the original kernel so the identity V~(f/g) = V(f) is exact
    // up to the kernel's own modulus; re-tabulating would add interpolation
    // error at transformed abscissae.
    auto shared = std::make_shared<const Kernel>(kernel);
    std::vector<std::function<double(double)>> funcs;
    funcs.reserve(space.atom_count());
    for (std::size_t i = 0; i < space.atom_count(); ++i) {
        const double gi = g[i];
        funcs.push_back([shared, i, gi](double l) { return shared->eval(i, l * gi) / gi; });
    }
    return {Kernel::closed(std::move(funcs)), std::move(transformed_space)};
}

LatticeFunction l1_factor(const Kernel& kernel, const LatticeFunction& f) {
    if (kernel.atom_count() != f.size()) throw InvalidInput("l1_factor: size mismatch");
    LatticeFunction out = LatticeFunction::zeros(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = (f[i] == 0.0) ? 0.0 : kernel.eval(i, f[i]);
    return out;
}

ProportionalityResult proportionality_check(
    const std::function<double(const MeasurableSet&)>& nu, const MeasureSpace& space,
    long trials, std::uint64_t seed) {
    if (!space.nonatomic_surrogate() || !space.uniform_weights())
        throw InvalidInput("proportionality_check: requires a uniform non-atomic surrogate grid");
    if (trials < 1) throw InvalidInput("proportionality_check: trials must be >= 1");

    const MeasurableSet omega = MeasurableSet::full(space.atom_count());
    const double mu_total = space.measure(omega);
    const double c = mu_total == 0.0 ? 0.0 : nu(omega) / mu_total;

    double max_gap = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(t)));
        const std::size_t k = rng.next_index(space.atom_count() + 1);
        const MeasurableSet a(sample_indices(rng, space.atom_count(), k));
        max_gap = std::max(max_gap, std::abs(nu(a) - c * space.measure(a)));
    }
    return ProportionalityResult{c, max_gap};
}

DefectReport invariance_check(const Valuation& v, const std::vector<double>& lambdas,
                              const MeasureSpace& space, long trials, std::uint64_t seed) {
    if (!space.uniform_weights())
        throw InvalidInput("invariance_check: requires a uniform grid");
    if (v.dimension() != space.atom_count())
        throw InvalidInput("invariance_check: valuation/space size mismatch");
    if (lambdas.empty()) throw InvalidInput("invariance_check: no lambdas");

    DefectReport report;
    report.trials = trials;
    report.seed = seed;
    for (long t = 0; t < trials; ++t) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(t)));
        const double lambda = lambdas[rng.next_index(lambdas.size())];
        const std::size_t k = rng.next_index(space.atom_count() + 1);
        const MeasurableSet a(sample_indices(rng, space.atom_count(), k));
        const MeasurableSet a_prime =
            equal_measure_transport(a, space, rng.next_u64());
        const LatticeFunction fa = scaled_indicator(space.atom_count(), lambda, a);
        const LatticeFunction fb = scaled_indicator(space.atom_count(), lambda, a_prime);
        const double defect = std::abs(v(fa) - v(fb));
        if (defect > report.max_defect) {
            report.max_defect = defect;
            report.witness = {fa, fb};
        }
    }
    return report;
}

ThetaRecovery recover_theta(const Valuation& v, std::vector<double> lambda_grid,
                            const MeasureSpace& space) {
    if (v.dimension() != space.atom_count())
        throw InvalidInput("recover_theta: valuation/space size mismatch");
    const std::vector<double> grid = normalize_lambda_grid(std::move(lambda_grid));

    const std::size_t n = space.atom_count();
    const std::size_t half = (n + 1) / 2;
    std::vector<std::size_t> first(half), second(half);
    for (std::size_t i = 0; i < half; ++i) {
        first[i] = i;
        second[i] = n - half + i;
    }
    const MeasurableSet ref_a(std::move(first));
    const MeasurableSet ref_b(std::move(second));
    const double mass_a = space.measure(ref_a);
    const double mass_b = space.measure(ref_b);

    ThetaRecovery out;
    out.theta.lambda_grid = grid;
    out.theta.values.assign(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] == 0.0) continue; // theta(0) = 0 forced
        const double va = nu_lambda(v, grid[j], ref_a) / mass_a;
        const double vb = nu_lambda(v, grid[j], ref_b) / mass_b;
        out.theta.values[j] = va;
        out.cross_reference_gap = std::max(out.cross_reference_gap, std::abs(va - vb));
    }
    return out;
}

GrowthBound fit_growth_bound(const ThetaFunction& theta, double p, bool finite_measure) {
    if (!(p >= 1.0)) throw InvalidInput("fit_growth_bound: p must be >= 1");
    if (theta.lambda_grid.size() != theta.values.size() || theta.lambda_grid.empty())
        throw InvalidInput("fit_growth_bound: malformed theta table");

    GrowthBound bound;
    bound.p = p;
    bound.finite_measure = finite_measure;

    if (finite_measure) {
        double b = 0.0;
        for (std::size_t j = 0; j < theta.lambda_grid.size(); ++j)
            if (std::abs(theta.lambda_grid[j]) <= 1.0) b = std::max(b, std::abs(theta.values[j]));
        double a = 0.0;
        for (std::size_t j = 0; j < theta.lambda_grid.size(); ++j) {
            const double l = std::abs(theta.lambda_grid[j]);
            if (l > 1.0)
                a = std::max(a, (std::abs(theta.values[j]) - b) / std::pow(l, p));
        }
        bound.a = std::max(a, 0.0);
        bound.b = b;
    } else {
        double a = 0.0;
        for (std::size_t j = 0; j < theta.lambda_grid.size(); ++j) {
            const double l = std::abs(theta.lambda_grid[j]);
            if (l > 0.0) a = std::max(a, std::abs(theta.values[j]) / std::pow(l, p));
        }
        bound.a = a;
        bound.b = 0.0;
    }
    if (!std::isfinite(bound.a))
        throw Error("fit_growth_bound: no envelope of shape a|l|^p + b fits the samples");
    return bound;
}

} // namespace vallab
