#include <doctest.h>

#include <cmath>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"
#include "vallab/probes.hpp"
#include "vallab/rng.hpp"
#include "vallab/valuation.hpp"

using namespace vallab;
using namespace vallab::probes;

namespace {

LatticeFunction basis_vector(std::size_t dim, std::size_t n) {
    LatticeFunction e = LatticeFunction::zeros(dim);
    e[n - 1] = 1.0;
    return e;
}

} // namespace

TEST_CASE("c0 series valuation") {
    const SeriesValuation series(60);

    CHECK(series.value(basis_vector(60, 3)) == 3.0); // V(e_n) = n
    for (std::size_t n = 1; n <= 30; ++n) CHECK(series.value(basis_vector(60, n)) == double(n));
    CHECK(series.value(LatticeFunction::zeros(60)) == 0.0);

    // Partial sums of n * (1/2)^n: independent running-power oracle and the
    // analytic value eps/(1-eps)^2 = 2.
    LatticeFunction half = LatticeFunction::zeros(50);
    for (auto& x : half.values) x = 0.5;
    KahanSum oracle;
    double power = 1.0;
    for (int n = 1; n <= 50; ++n) {
        power *= 0.5;
        oracle.add(static_cast<double>(n) * power);
    }
    CHECK(std::abs(series.value(half) - oracle.value()) <= 1e-12);
    CHECK(std::abs(series.value(half) - 2.0) <= 1e-12); // tail < 1e-13 at N=50

    // Rejections: negative entries, support beyond the truncation.
    LatticeFunction neg = LatticeFunction::zeros(60);
    neg[2] = -0.5;
    CHECK_THROWS_AS(series.value(neg), InvalidInput);
    const SeriesValuation tiny(3);
    LatticeFunction wide = LatticeFunction::zeros(5);
    wide[4] = 1.0;
    CHECK_THROWS_AS(tiny.value(wide), InvalidInput);
    LatticeFunction padded = LatticeFunction::zeros(5); // zeros beyond N are fine
    padded[1] = 1.0;
    CHECK(tiny.value(padded) == 2.0);
}

TEST_CASE("c0 series valuation passes the valuation law coordinatewise") {
    // max{x,y}^n + min{x,y}^n = x^n + y^n per coordinate.
    const SeriesValuation series(20);
    const Valuation v = series.as_valuation();
    Rng rng(55);
    for (int t = 0; t < 300; ++t) {
        LatticeFunction f = LatticeFunction::zeros(20);
        LatticeFunction g = LatticeFunction::zeros(20);
        for (auto& x : f.values) x = rng.next_in(0.0, 1.2);
        for (auto& x : g.values) x = rng.next_in(0.0, 1.2);
        const double scale = 1.0 + std::abs(v(f)) + std::abs(v(g));
        CHECK(valuation_defect(v, f, g) <= 1e-10 * scale);
    }
}

TEST_CASE("series continuity stays below the analytic envelope") {
    // |V(x) - V(y)| <= eps + 2 eps/(1-eps)^2 for ||x-y||_inf < delta(eps),
    // with the exact series constant (not the printed one).
    const SeriesValuation series(40);
    Rng rng(77);
    const double eps = 0.25;
    LatticeFunction x = LatticeFunction::zeros(40);
    for (std::size_t i = 0; i < 10; ++i) x[i] = rng.next_in(0.0, 1.0);
    const double envelope = eps + 2.0 * eps / ((1.0 - eps) * (1.0 - eps));
    // delta small enough for the per-coordinate increments at this x.
    const double delta = 1e-4;
    for (int t = 0; t < 100; ++t) {
        LatticeFunction y = x;
        for (auto& v : y.values) v = std::max(0.0, v + rng.next_in(-delta, delta));
        CHECK(std::abs(series.value(x) - series.value(y)) <= envelope);
    }
}

TEST_CASE("series identity probe flags the printed closed form") {
    const SeriesIdentityProbe probe = series_identity_probe(0.5, 50);
    CHECK(probe.oracle_closed_form == 2.0);
    CHECK(probe.printed_closed_form == 4.0);
    CHECK(std::abs(probe.partial_sum - probe.oracle_closed_form) <= 1e-9);
    CHECK(probe.printed_formula_discrepant);
}

TEST_CASE("basis series valuation") {
    LatticeFunction e7 = LatticeFunction::zeros(20);
    e7[6] = -1.0; // sign is immaterial: |a_n|
    CHECK(basis_series_valuation(e7, 1.0, 20).value == 7.0);

    Rng rng(3);
    LatticeFunction a = LatticeFunction::zeros(30);
    for (auto& x : a.values) x = rng.next_in(-0.5, 0.5);
    const BasisSeriesResult r = basis_series_valuation(a, 0.5, 30);
    CHECK(r.value <= 2.0); // exact closed-form cap for |a_n| <= 1/2
    CHECK(r.norm_lower_bound <= 0.5 * 0.5 + 1e-15);

    CHECK(basis_series_valuation(LatticeFunction::zeros(10), 1.0, 10).value == 0.0);
    CHECK_THROWS_AS(basis_series_valuation(a, 0.0, 30), InvalidInput);
}

TEST_CASE("min functional and the two-block witness") {
    CHECK(min_functional(LatticeFunction::constant(5, 0.7)) == 0.7);
    LatticeFunction with_zero = LatticeFunction::constant(5, 0.7);
    with_zero[3] = 0.0;
    CHECK(min_functional(with_zero) == 0.0);

    const auto [f, g] = two_block_witness(4, 6);
    const Valuation phi =
        opaque_valuation("min", 10, [](const LatticeFunction& x) { return min_functional(x); });

    // phi(f)=phi(g)=phi(f^g)=0 while phi(f v g)=1: valuation defect exactly 1.
    CHECK(min_functional(f) == 0.0);
    CHECK(min_functional(g) == 0.0);
    CHECK(min_functional(meet(f, g)) == 0.0);
    CHECK(min_functional(join(f, g)) == 1.0);
    CHECK(valuation_defect(phi, f, g) == 1.0);

    // chi_A + chi_B = chi_K: orthogonality defect exactly 1 on the
    // disconnected model.
    CHECK(is_disjoint(f, g));
    CHECK(orthogonality_defect(phi, f, g) == 1.0);
}

TEST_CASE("connected path model keeps the min functional orthogonally additive") {
    const DefectReport rep = connected_disjoint_additivity_suite(64, 1000, 17);
    CHECK(rep.max_defect == 0.0);
    CHECK(rep.trials == 1000);
}

TEST_CASE("tent kernel model") {
    const int n_blocks = 8;
    const TentModel model = tent_kernel_phi_n(n_blocks);
    REQUIRE(model.space.atom_count() == static_cast<std::size_t>(n_blocks) + 1);

    // Block masses 2^-2n and the remainder.
    for (int n = 1; n <= n_blocks; ++n)
        CHECK(model.space.weight(static_cast<std::size_t>(n - 1)) == std::ldexp(1.0, -2 * n));
    CHECK(model.space.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

    // phi_n: peak 2^n at lambda = 2, support [0, 4].
    for (int n = 1; n <= n_blocks; ++n) {
        const std::size_t atom = static_cast<std::size_t>(n - 1);
        CHECK(model.kernel.eval(atom, 2.0) == std::ldexp(1.0, n));
        CHECK(model.kernel.eval(atom, 0.0) == 0.0);
        CHECK(model.kernel.eval(atom, 4.0) == 0.0);
        CHECK(model.kernel.eval(atom, 5.0) == 0.0);
        CHECK(model.kernel.eval(atom, 1.0) == std::ldexp(1.0, n - 1));
    }
    CHECK(model.kernel.eval(static_cast<std::size_t>(n_blocks), 2.0) == 0.0); // null remainder

    // The induced valuation is globally bounded by sum 2^n mu(A_n) < 1.
    const Valuation v = kernel_valuation(model.kernel, model.space, "tent");
    const double cap = 1.0 - std::ldexp(1.0, -n_blocks);
    Rng rng(21);
    double max_seen = 0.0;
    for (int t = 0; t < 2000; ++t) {
        LatticeFunction f = LatticeFunction::zeros(model.space.atom_count());
        for (auto& x : f.values) x = rng.next_in(0.0, 6.0);
        const double value = v(f);
        max_seen = std::max(max_seen, value);
        CHECK(value <= cap);
    }
    CHECK(max_seen < 1.0);
}

TEST_CASE("boundedness certificate") {
    const NormSpec l2 = NormSpec::lp(2.0);

    SUBCASE("f = 1 on the unit-mass grid: at most 4 pieces, bound 6") {
        const MeasureSpace grid = MeasureSpace::uniform_grid(1000, 1.0);
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Valuation v = kernel_valuation(Kernel::from_closed_form(spec, 1000), grid);
        const LatticeFunction ones = LatticeFunction::constant(1000, 1.0);
        const BoundednessCertificate cert =
            boundedness_certificate(v, ones, 0.5, 2.0, l2, grid);

        CHECK(cert.pieces.size() <= 4);
        CHECK(cert.bound == doctest::Approx(6.0).epsilon(1e-9)); // (1/0.5)^2 + 2, slack 0
        CHECK(cert.achieved <= cert.bound);
        CHECK(cert.reconstruction_gap <= 1e-12);
        CHECK(cert.calibration_ok);
        for (const auto& piece : cert.pieces) {
            const double pn = norm(grid, restrict_to(ones, piece), l2);
            CHECK(pn <= 0.5);
            CHECK(pn >= 0.5 * (1.0 - cert.max_grid_slack) * (1.0 - 1e-12));
        }
        // Pieces are pairwise disjoint.
        for (std::size_t i = 0; i < cert.pieces.size(); ++i)
            for (std::size_t j = i + 1; j < cert.pieces.size(); ++j)
                CHECK(set_intersection(cert.pieces[i], cert.pieces[j]).is_empty());
    }

    SUBCASE("||f|| <= delta yields zero pieces and bound <= 3") {
        const MeasureSpace grid = MeasureSpace::uniform_grid(256, 1.0);
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Valuation v = kernel_valuation(Kernel::from_closed_form(spec, 256), grid);
        const LatticeFunction small = LatticeFunction::constant(256, 0.4);
        const BoundednessCertificate cert =
            boundedness_certificate(v, small, 0.5, 2.0, l2, grid);
        CHECK(cert.pieces.empty());
        CHECK(cert.bound <= 3.0 + 1e-12);
        CHECK(cert.achieved <= cert.bound);
    }

    SUBCASE("decomposition identity on random inputs") {
        const MeasureSpace grid = MeasureSpace::uniform_grid(512, 1.0);
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        spec.params["scale"] = {2.0};
        const Valuation v = kernel_valuation(Kernel::from_closed_form(spec, 512), grid);
        Rng rng(8);
        for (int t = 0; t < 10; ++t) {
            LatticeFunction f = LatticeFunction::zeros(512);
            for (auto& x : f.values) x = rng.next_in(0.3, 1.8);
            const BoundednessCertificate cert =
                boundedness_certificate(v, f, 0.5, 2.0, l2, grid);
            CHECK(cert.reconstruction_gap <= 1e-12);
            CHECK(cert.achieved <= cert.bound);
            CHECK(cert.slack >= 0.0);
        }
    }

    SUBCASE("preconditions") {
        const MeasureSpace grid = MeasureSpace::uniform_grid(64, 1.0);
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Valuation v = kernel_valuation(Kernel::from_closed_form(spec, 64), grid);
        const LatticeFunction f = LatticeFunction::constant(64, 1.0);
        CHECK_THROWS_AS(boundedness_certificate(v, f, 0.5, 2.0, NormSpec::sup(), grid),
                        InvalidInput);
        CHECK_THROWS_AS(boundedness_certificate(v, f, 0.5, 1.5, l2, grid), InvalidInput);
        const MeasureSpace atomic({1.0, 1.0});
        const Valuation v2 = kernel_valuation(Kernel::from_closed_form(spec, 2), atomic);
        CHECK_THROWS_AS(
            boundedness_certificate(v2, LatticeFunction::constant(2, 1.0), 0.5, 2.0, l2, atomic),
            InvalidInput);
    }
}

TEST_CASE("atomic proportionality counterexample") {
    const AtomicProportionalityProbe probe = atomic_proportionality_gap();
    CHECK(probe.c == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(probe.gap == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}
