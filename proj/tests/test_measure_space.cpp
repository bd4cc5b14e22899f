#include <doctest.h>

#include <cmath>

#include "vallab/errors.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"
#include "vallab/rng.hpp"

using namespace vallab;

namespace {

MeasurableSet make_set(std::initializer_list<std::size_t> idx) {
    return MeasurableSet(std::vector<std::size_t>(idx));
}

MeasurableSet random_set(Rng& rng, std::size_t n) {
    return MeasurableSet(sample_indices(rng, n, rng.next_index(n + 1)));
}

} // namespace

TEST_CASE("uniform grid construction") {
    const MeasureSpace s4 = MeasureSpace::uniform_grid(4, 1.0);
    REQUIRE(s4.atom_count() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s4.weight(i) == 0.25);
    CHECK(s4.nonatomic_surrogate());
    CHECK(s4.total_mass() == doctest::Approx(1.0).epsilon(1e-15));

    const MeasureSpace s1 = MeasureSpace::uniform_grid(1, 2.0);
    CHECK(s1.weight(0) == 2.0);

    const MeasureSpace fine = MeasureSpace::uniform_grid(1000000, 1.0);
    CHECK(fine.granularity() == doctest::Approx(1e-6).epsilon(1e-12));

    CHECK_THROWS_AS(MeasureSpace::uniform_grid(0, 1.0), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace::uniform_grid(4, 0.0), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace::uniform_grid(4, -1.0), InvalidInput);
}

TEST_CASE("space invariants") {
    CHECK_THROWS_AS(MeasureSpace({1.0, 0.0}), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace({1.0, -2.0}), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace({}), InvalidInput);

    // Chunks: strictly increasing prefixes exhausting all atoms.
    CHECK_NOTHROW(MeasureSpace({1, 1, 1, 1}, {2, 4}));
    CHECK_THROWS_AS(MeasureSpace({1, 1, 1, 1}, {2, 2, 4}), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace({1, 1, 1, 1}, {2, 3}), InvalidInput);
    CHECK_THROWS_AS(MeasureSpace({1, 1, 1, 1}, {0, 4}), InvalidInput);

    // Infinite mass is a convention that requires chunking.
    CHECK_NOTHROW(MeasureSpace({1, 2, 4}, {1, 3}, false, true));
    CHECK_THROWS_AS(MeasureSpace({1, 2, 4}, {}, false, true), InvalidInput);
}

TEST_CASE("measurable sets") {
    CHECK_THROWS_AS(MeasurableSet({1, 1}), InvalidInput);
    const MeasurableSet a = make_set({3, 1});
    CHECK(a.indices() == std::vector<std::size_t>({1, 3}));
    CHECK(a.contains(3));
    CHECK(!a.contains(2));

    const MeasurableSet b = make_set({1, 2});
    CHECK(set_union(a, b).indices() == std::vector<std::size_t>({1, 2, 3}));
    CHECK(set_intersection(a, b).indices() == std::vector<std::size_t>({1}));
    CHECK(set_complement(a, 5).indices() == std::vector<std::size_t>({0, 2, 4}));
}

TEST_CASE("symmetric-difference distance") {
    const MeasureSpace unit({1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(symdiff_distance(unit, make_set({0, 1}), make_set({1, 2})) == 2.0);
    CHECK(symdiff_distance(unit, make_set({0, 3}), make_set({0, 3})) == 0.0);
    CHECK(symdiff_distance(unit, MeasurableSet::empty(), MeasurableSet::full(5)) ==
          unit.total_mass());
    CHECK_THROWS_AS(symdiff_distance(unit, make_set({7}), make_set({1})), InvalidInput);

    // Triangle inequality, exact on integer weights.
    Rng rng(2024);
    for (int t = 0; t < 300; ++t) {
        const MeasurableSet x = random_set(rng, 5);
        const MeasurableSet y = random_set(rng, 5);
        const MeasurableSet z = random_set(rng, 5);
        CHECK(symdiff_distance(unit, x, z) <=
              symdiff_distance(unit, x, y) + symdiff_distance(unit, y, z));
    }

    // Zero iff equal as index sets.
    for (int t = 0; t < 100; ++t) {
        const MeasurableSet x = random_set(rng, 5);
        const MeasurableSet y = random_set(rng, 5);
        CHECK((symdiff_distance(unit, x, y) == 0.0) == (x == y));
    }
}

TEST_CASE("equal-measure transport") {
    const MeasureSpace grid = MeasureSpace::uniform_grid(10, 1.0);
    const MeasurableSet a = make_set({0, 4, 7});

    const MeasurableSet a1 = equal_measure_transport(a, grid, 11);
    CHECK(a1.size() == 3);
    // Measure preserved exactly: same cardinality, equal weights.
    CHECK(grid.measure(a1) == grid.measure(a));

    const MeasurableSet a2 = equal_measure_transport(a, grid, 11);
    CHECK(a1 == a2); // determinism under the seed

    CHECK(equal_measure_transport(MeasurableSet::full(10), grid, 3) == MeasurableSet::full(10));

    const MeasureSpace skew({1.0, 2.0});
    CHECK_THROWS_AS(equal_measure_transport(make_set({0}), skew, 1), InvalidInput);
}

TEST_CASE("subset search hits the norm target") {
    const MeasureSpace grid = MeasureSpace::uniform_grid(1000, 1.0);
    const NormSpec l2 = NormSpec::lp(2.0);
    const LatticeFunction ones = LatticeFunction::constant(1000, 1.0);

    const SubsetSearchResult r =
        find_subset_with_target_norm(grid, ones, 0.5, l2, MeasurableSet::empty());
    const double mass = grid.measure(r.set);
    CHECK(mass >= 0.2498); // greedy-accumulation oracle: ||chi_A||_2 = mass^(1/2)
    CHECK(mass <= 0.25 + 1e-15);
    CHECK(r.achieved_norm <= 0.5);
    CHECK(r.achieved_norm >= 0.5 * (1.0 - r.slack) * (1.0 - 1e-12));

    CHECK_THROWS_AS(find_subset_with_target_norm(grid, LatticeFunction::zeros(1000), 0.5, l2,
                                                 MeasurableSet::empty()),
                    TargetUnreachable);

    LatticeFunction spike = LatticeFunction::zeros(1000);
    spike[0] = 1000.0; // single atom dominates delta
    CHECK_THROWS_AS(find_subset_with_target_norm(grid, spike, 0.5, l2, MeasurableSet::empty()),
                    GridTooCoarse);

    const MeasureSpace atomic({1.0, 1.0});
    CHECK_THROWS_AS(find_subset_with_target_norm(atomic, LatticeFunction::constant(2, 1.0), 0.5,
                                                 l2, MeasurableSet::empty()),
                    InvalidInput);
}

TEST_CASE("subset search properties over random inputs") {
    const MeasureSpace grid = MeasureSpace::uniform_grid(500, 1.0);
    const NormSpec l2 = NormSpec::lp(2.0);
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        LatticeFunction f = LatticeFunction::zeros(500);
        for (auto& x : f.values) x = rng.next_in(0.2, 2.0);
        const double delta = rng.next_in(0.3, 0.8);
        const MeasurableSet forbidden(sample_indices(rng, 500, rng.next_index(100)));
        const SubsetSearchResult r = find_subset_with_target_norm(grid, f, delta, l2, forbidden);
        CHECK(r.achieved_norm <= delta); // hard upper bound
        CHECK(r.achieved_norm >= delta * (1.0 - r.slack) * (1.0 - 1e-12));
        CHECK(set_intersection(r.set, forbidden).is_empty());
    }
}

TEST_CASE("subset search under sup norm") {
    const MeasureSpace grid = MeasureSpace::uniform_grid(50, 1.0);
    LatticeFunction f = LatticeFunction::zeros(50);
    Rng rng(5);
    for (auto& x : f.values) x = rng.next_in(0.0, 0.4);
    f[20] = 0.45;
    const SubsetSearchResult r =
        find_subset_with_target_norm(grid, f, 0.5, NormSpec::sup(), MeasurableSet::empty());
    CHECK(r.achieved_norm <= 0.5);
    CHECK(r.achieved_norm >= 0.5 * (1.0 - r.slack) * (1.0 - 1e-12));
}

TEST_CASE("chunk exhaustion is monotone and reaches the full norm") {
    // Discrete analogue of order continuity.
    std::vector<double> weights(40, 0.1);
    const MeasureSpace space(weights, {10, 25, 40}, false);
    const NormSpec l2 = NormSpec::lp(2.0);
    Rng rng(31);
    LatticeFunction f = LatticeFunction::zeros(40);
    for (auto& x : f.values) x = rng.next_in(-2.0, 2.0);

    double prev = 0.0;
    for (std::size_t k = 0; k < space.chunk_prefixes().size(); ++k) {
        const double nk = norm(space, restrict_to_chunk(space, f, k), l2);
        CHECK(nk >= prev - 1e-15);
        prev = nk;
    }
    CHECK(prev == norm(space, f, l2)); // last chunk is the whole space
}
