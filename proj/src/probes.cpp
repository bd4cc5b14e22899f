#include "vallab/probes.hpp"

#include <algorithm>
#include <cmath>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"
#include "vallab/rng.hpp"

namespace vallab::probes {

SeriesValuation::SeriesValuation(long truncation) : truncation_(truncation) {
    if (truncation < 1) throw InvalidInput("SeriesValuation: truncation must be >= 1");
}

double SeriesValuation::value(const LatticeFunction& x) const {
    const std::size_t n_max = static_cast<std::size_t>(truncation_);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) throw InvalidInput("SeriesValuation: defined on the positive cone only");
        if (i >= n_max && x[i] != 0.0)
            throw InvalidInput("SeriesValuation: nonzero coordinate beyond the truncation");
    }
    KahanSum sum;
    const std::size_t limit = std::min(x.size(), n_max);
    for (std::size_t i = 0; i < limit; ++i) {
        if (x[i] == 0.0) continue;
        const double n = static_cast<double>(i + 1);
        sum.add(n * std::pow(x[i], n));
    }
    return sum.value();
}

Valuation SeriesValuation::as_valuation() const {
    const SeriesValuation self = *this;
    return opaque_valuation("c0-series", static_cast<std::size_t>(truncation_),
                            [self](const LatticeFunction& x) { return self.value(x); });
}

BasisSeriesResult basis_series_valuation(const LatticeFunction& a, double c_unconditionality,
                                         long truncation) {
    if (!(c_unconditionality > 0.0))
        throw InvalidInput("basis_series_valuation: unconditionality constant must be positive");
    if (truncation < 1) throw InvalidInput("basis_series_valuation: truncation must be >= 1");
    const std::size_t n_max = static_cast<std::size_t>(truncation);
    for (std::size_t i = n_max; i < a.size(); ++i)
        if (a[i] != 0.0)
            throw InvalidInput("basis_series_valuation: nonzero coordinate beyond the truncation");

    KahanSum sum;
    double sup_coeff = 0.0;
    const std::size_t limit = std::min(a.size(), n_max);
    for (std::size_t i = 0; i < limit; ++i) {
        const double mag = std::abs(a[i]);
        sup_coeff = std::max(sup_coeff, mag);
        if (mag == 0.0) continue;
        const double n = static_cast<double>(i + 1);
        sum.add(n * std::pow(mag, n));
    }
    return BasisSeriesResult{sum.value(), c_unconditionality * sup_coeff};
}

double min_functional(const LatticeFunction& f) {
    if (f.size() == 0) throw InvalidInput("min_functional: empty function");
    double m = std::abs(f[0]);
    for (double x : f.values) m = std::min(m, std::abs(x));
    return m;
}

std::pair<LatticeFunction, LatticeFunction> two_block_witness(std::size_t block1,
                                                              std::size_t block2) {
    if (block1 == 0 || block2 == 0) throw InvalidInput("two_block_witness: empty block");
    const std::size_t n = block1 + block2;
    LatticeFunction f = LatticeFunction::zeros(n);
    LatticeFunction g = LatticeFunction::zeros(n);
    for (std::size_t i = 0; i < block1; ++i) f[i] = 1.0;
    for (std::size_t i = block1; i < n; ++i) g[i] = 1.0;
    return {std::move(f), std::move(g)};
}

DefectReport connected_disjoint_additivity_suite(std::size_t n_grid, long trials,
                                                 std::uint64_t seed) {
    if (n_grid < 3) throw InvalidInput("connected suite: need at least 3 path nodes");
    if (trials < 1) throw InvalidInput("connected suite: trials must be >= 1");

    DefectReport report;
    report.trials = trials;
    report.seed = seed;
    for (long t = 0; t < trials; ++t) {
        Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(t)));

        // Two support intervals on the path, separated by at least one
        // exact-zero node: continuous disjoint functions on a connected
        // space vanish on the closure of each other's support, and the gap
        // node is the discrete image of that.
        const std::size_t a1 = rng.next_index(n_grid - 2);
        const std::size_t b1 = a1 + rng.next_index(n_grid - 2 - a1);
        const std::size_t gap = b1 + 1;
        LatticeFunction f = LatticeFunction::zeros(n_grid);
        LatticeFunction g = LatticeFunction::zeros(n_grid);
        for (std::size_t i = a1; i <= b1; ++i) f[i] = rng.next_in(0.1, 2.0);
        if (gap + 1 < n_grid) {
            const std::size_t a2 = gap + 1 + rng.next_index(n_grid - gap - 1);
            const std::size_t b2 = a2 + rng.next_index(n_grid - a2);
            for (std::size_t i = a2; i < std::min(b2 + 1, n_grid); ++i) g[i] = rng.next_in(0.1, 2.0);
        }
        // Occasionally degenerate to the g = 0 edge case.
        if (rng.next_index(10) == 0) g = LatticeFunction::zeros(n_grid);

        const double defect = std::abs(min_functional(f + g) - min_functional(f) -
                                       min_functional(g));
        if (defect > report.max_defect) {
            report.max_defect = defect;
            report.witness = {f, g};
        }
    }
    return report;
}

TentModel tent_kernel_phi_n(int n_blocks) {
    if (n_blocks < 1) throw InvalidInput("tent_kernel_phi_n: n_blocks must be >= 1");
    // Blocks A_n of mass 2^-2n inside [0,1]; the rest of the interval is a
    // single null-kernel block.
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(n_blocks) + 1);
    double used = 0.0;
    for (int n = 1; n <= n_blocks; ++n) {
        const double mass = std::ldexp(1.0, -2 * n);
        weights.push_back(mass);
        used += mass;
    }
    weights.push_back(1.0 - used);

    ClosedFormSpec spec;
    spec.name = "tent_phi_n";
    spec.params["n_blocks"] = {static_cast<double>(n_blocks)};
    Kernel kernel = Kernel::from_closed_form(spec, weights.size());
    MeasureSpace space(std::move(weights), {}, /*nonatomic_surrogate=*/true);
    return TentModel{std::move(kernel), std::move(space)};
}

BoundednessCertificate boundedness_certificate(const Valuation& v, const LatticeFunction& f,
                                               double delta, double q, const NormSpec& spec,
                                               const MeasureSpace& space) {
    if (!(delta > 0.0)) throw InvalidInput("boundedness_certificate: delta must be positive");
    if (!space.nonatomic_surrogate())
        throw InvalidInput("boundedness_certificate: space must be a non-atomic surrogate");
    if (spec.variant() != NormSpec::Variant::lp || !(q >= spec.p()))
        throw InvalidInput(
            "boundedness_certificate: requires an Lp norm with q >= p (lower q-estimate with "
            "constant 1)");
    if (f.size() != space.atom_count())
        throw InvalidInput("boundedness_certificate: function/space size mismatch");

    BoundednessCertificate cert;
    cert.delta = delta;
    cert.q = q;
    cert.norm_f = norm(space, f, spec);
    cert.achieved = std::abs(v(f));

    MeasurableSet used = MeasurableSet::empty();
    double max_slack = 0.0;
    while (true) {
        const LatticeFunction rest = restrict_to(f, set_complement(used, space.atom_count()));
        if (norm(space, rest, spec) <= delta) break;
        SubsetSearchResult piece = find_subset_with_target_norm(space, f, delta, spec, used);
        max_slack = std::max(max_slack, piece.slack);
        used = set_union(used, piece.set);
        cert.pieces.push_back(std::move(piece.set));
    }
    cert.remainder = set_complement(used, space.atom_count());

    // Decomposition identity and the empirical delta-calibration.
    KahanSum reconstruction;
    double max_piece = 0.0;
    for (const auto& piece : cert.pieces) {
        const double value = v(restrict_to(f, piece));
        max_piece = std::max(max_piece, std::abs(value));
        reconstruction.add(value);
    }
    const double rest_value = v(restrict_to(f, cert.remainder));
    max_piece = std::max(max_piece, std::abs(rest_value));
    reconstruction.add(rest_value);
    cert.reconstruction_gap = std::abs(reconstruction.value() - v(f));
    cert.max_piece_value = max_piece;
    cert.calibration_ok = max_piece <= 1.0;

    // m pieces of norm >= delta(1-eps) against the lower q-estimate give
    // m <= (||f||/delta)^q (1-eps)^-q; with the remainder that is
    // |V(f)| <= m + 1 <= (||f||/delta)^q + 2 + slack.
    const double base = std::pow(cert.norm_f / delta, q);
    cert.max_grid_slack = max_slack;
    double slack = 0.0;
    if (max_slack > 0.0) slack = std::max(0.0, base * (std::pow(1.0 - max_slack, -q) - 1.0) - 1.0);
    const double piece_budget = static_cast<double>(cert.pieces.size()) + 1.0;
    slack = std::max(slack, piece_budget - (base + 2.0)); // never certify below the actual count
    cert.slack = std::max(0.0, slack);
    cert.bound = base + 2.0 + cert.slack;
    return cert;
}

SeriesIdentityProbe series_identity_probe(double epsilon, long terms) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw InvalidInput("series_identity_probe: epsilon must be in (0,1)");
    if (terms < 1) throw InvalidInput("series_identity_probe: terms must be >= 1");

    SeriesIdentityProbe probe;
    probe.epsilon = epsilon;
    probe.terms = terms;

    // Independent oracle: running powers, no pow() calls.
    KahanSum sum;
    double power = 1.0;
    for (long n = 1; n <= terms; ++n) {
        power *= epsilon;
        sum.add(static_cast<double>(n) * power);
    }
    probe.partial_sum = sum.value();
    const double om = 1.0 - epsilon;
    probe.oracle_closed_form = epsilon / (om * om);
    probe.printed_closed_form = 1.0 + (2.0 - epsilon) * epsilon / (om * om);
    probe.printed_formula_discrepant =
        std::abs(probe.printed_closed_form - probe.oracle_closed_form) > 1e-9;
    return probe;
}

AtomicProportionalityProbe atomic_proportionality_gap() {
    // mu = (1, 2), nu = (1, 1): every subset has a distinct mu-mass, so the
    // hypothesis "nu(A) = nu(A') whenever mu(A) = mu(A')" holds vacuously,
    // yet nu is not proportional to mu. Atoms are exactly what breaks the
    // halving argument behind proportionality.
    const double mu[2] = {1.0, 2.0};
    const double nu[2] = {1.0, 1.0};
    const double c = (nu[0] + nu[1]) / (mu[0] + mu[1]);
    double gap = 0.0;
    for (int mask = 0; mask < 4; ++mask) {
        double mu_a = 0.0, nu_a = 0.0;
        for (int i = 0; i < 2; ++i) {
            if (mask & (1 << i)) {
                mu_a += mu[i];
                nu_a += nu[i];
            }
        }
        gap = std::max(gap, std::abs(nu_a - c * mu_a));
    }
    return AtomicProportionalityProbe{c, gap};
}

} // namespace vallab::probes
