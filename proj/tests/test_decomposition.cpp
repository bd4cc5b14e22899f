#include <doctest.h>

#include <cmath>

#include "vallab/decomposition.hpp"
#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"
#include "vallab/rng.hpp"

using namespace vallab;

namespace {

LatticeFunction random_pos(Rng& rng, std::size_t n, double hi = 2.0) {
    LatticeFunction f = LatticeFunction::zeros(n);
    for (auto& x : f.values) x = rng.next_in(0.0, hi);
    return f;
}

// Per-atom max on a very fine grid; the independent oracle for the scan +
// ternary path.
double fine_grid_max(const std::function<double(double)>& h, double x) {
    double best = 0.0;
    const int m = 20000;
    for (int j = 0; j <= m; ++j) best = std::max(best, h(x * (static_cast<double>(j) / m)));
    return best;
}

} // namespace

TEST_CASE("positive part of kernel valuations") {
    const MeasureSpace space = MeasureSpace::uniform_grid(4, 1.0);

    SUBCASE("K(s) = s(s-1): supremum on [0,1] is 0") {
        const Kernel k = Kernel::closed_uniform(4, [](double s) { return s * (s - 1.0); });
        CHECK(positive_part_kernel(k, LatticeFunction::constant(4, 1.0), space) == 0.0);
    }

    SUBCASE("nonnegative nondecreasing K attains the sup at g = f") {
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Kernel k = Kernel::from_closed_form(spec, 4);
        const Valuation v = kernel_valuation(k, space);
        Rng rng(1);
        for (int t = 0; t < 20; ++t) {
            const LatticeFunction f = random_pos(rng, 4);
            CHECK(positive_part_kernel(k, f, space) == v(f));
        }
    }

    SUBCASE("f = 0 gives 0 and negative entries are rejected") {
        const Kernel k = Kernel::closed_uniform(4, [](double s) { return std::sin(s); });
        CHECK(positive_part_kernel(k, LatticeFunction::zeros(4), space) == 0.0);
        CHECK_THROWS_AS(
            positive_part_kernel(k, LatticeFunction(std::vector<double>{1, -1, 0, 0}), space),
            InvalidInput);
    }

    SUBCASE("table kernels take the exact node max") {
        // Tent on [0,2] with peak 3 at lambda=1, tabulated exactly.
        const Kernel k = Kernel::table({0.0, 1.0, 2.0}, {{0.0, 3.0, 0.0}});
        const MeasureSpace one({1.0});
        CHECK(positive_part_kernel(k, LatticeFunction(std::vector<double>{2.0}), one) == 3.0);
        CHECK(positive_part_kernel(k, LatticeFunction(std::vector<double>{0.5}), one) == 1.5);
    }

    SUBCASE("scan + refinement matches a much finer grid") {
        Rng rng(42);
        for (int t = 0; t < 10; ++t) {
            const double a = rng.next_in(-2.0, 2.0);
            const double b = rng.next_in(0.5, 3.0);
            auto h = [a, b](double s) { return a * std::sin(b * s); };
            const Kernel k = Kernel::closed_uniform(4, h);
            const LatticeFunction f = random_pos(rng, 4);
            const double got = positive_part_kernel(k, f, space);
            KahanSum expect;
            for (std::size_t i = 0; i < 4; ++i) {
                const double m = fine_grid_max(h, f[i]);
                if (m != 0.0) expect.add(m * space.weight(i));
            }
            CHECK(std::abs(got - expect.value()) <= 1e-7 * (1.0 + std::abs(expect.value())));
        }
    }
}

TEST_CASE("brute-force oracle") {
    const MeasureSpace space = MeasureSpace::uniform_grid(16, 1.0);
    Rng rng(7);

    SUBCASE("agreement with positive_part_kernel within the Lipschitz mesh bound") {
        for (int inst = 0; inst < 10; ++inst) {
            std::vector<std::function<double(double)>> h;
            std::vector<double> lip;
            for (int i = 0; i < 16; ++i) {
                const double a = rng.next_in(-2.0, 2.0);
                const double b = rng.next_in(0.5, 3.0);
                h.push_back([a, b](double s) { return a * std::sin(b * s); });
                lip.push_back(std::abs(a * b));
            }
            const Kernel k = Kernel::closed(h);
            const Valuation v = kernel_valuation(k, space);
            const LatticeFunction f = random_pos(rng, 16);
            const long grid_points = 100;
            const double ppk = positive_part_kernel(k, f, space);
            const double ppb = positive_part_bruteforce(v, f, grid_points);
            double bound = 0.0;
            for (std::size_t i = 0; i < 16; ++i)
                bound += space.weight(i) * lip[i] * f[i] / static_cast<double>(grid_points);
            CHECK(std::abs(ppk - ppb) <= bound);
        }
    }

    SUBCASE("monotone in f") {
        const Kernel k = Kernel::closed_uniform(16, [](double s) { return std::sin(3.0 * s); });
        const Valuation v = kernel_valuation(k, space);
        for (int t = 0; t < 20; ++t) {
            const LatticeFunction f = random_pos(rng, 16);
            LatticeFunction f2 = f;
            for (auto& x : f2.values) x += rng.next_in(0.0, 0.5);
            CHECK(positive_part_bruteforce(v, f, 64) <=
                  positive_part_bruteforce(v, f2, 64) + 1e-12);
        }
    }

    SUBCASE("dominates V(f) for any valuation (g = f is feasible)") {
        const Kernel k = Kernel::closed_uniform(16, [](double s) { return std::sin(3.0 * s); });
        const Valuation v = kernel_valuation(k, space);
        for (int t = 0; t < 20; ++t) {
            const LatticeFunction f = random_pos(rng, 16);
            CHECK(positive_part_bruteforce(v, f, 64) >= v(f) - 1e-12);
        }
    }

    SUBCASE("rejects opaque valuations and bad grids") {
        const Valuation opaque =
            opaque_valuation("op", 16, [](const LatticeFunction&) { return 0.0; });
        CHECK_THROWS_AS(positive_part_bruteforce(opaque, LatticeFunction::zeros(16), 64),
                        InvalidInput);
        const Kernel k = Kernel::closed_uniform(16, [](double s) { return s; });
        const Valuation v = kernel_valuation(k, space);
        CHECK_THROWS_AS(positive_part_bruteforce(v, LatticeFunction::zeros(16), 1), InvalidInput);
    }
}

TEST_CASE("Jordan decomposition") {
    const MeasureSpace space = MeasureSpace::uniform_grid(12, 1.0);
    Rng rng(19);

    SUBCASE("linear kernels decompose by coefficient sign") {
        std::vector<double> coeffs(12);
        for (auto& c : coeffs) c = rng.next_in(-2.0, 2.0);
        const Valuation v = linear_valuation(coeffs, space);
        const JordanPair pair = jordan_decompose(v, space);
        for (int t = 0; t < 20; ++t) {
            const LatticeFunction f = random_pos(rng, 12);
            KahanSum expect;
            for (std::size_t i = 0; i < 12; ++i) {
                const double m = std::max(coeffs[i], 0.0) * f[i] * space.weight(i);
                if (m != 0.0) expect.add(m);
            }
            CHECK(std::abs(pair.positive(f) - expect.value()) <=
                  1e-9 * (1.0 + std::abs(expect.value())));
        }
    }

    SUBCASE("already positive valuations have negative part 0") {
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Valuation v = kernel_valuation(Kernel::from_closed_form(spec, 12), space);
        const JordanPair pair = jordan_decompose(v, space);
        for (int t = 0; t < 10; ++t) {
            const LatticeFunction f = random_pos(rng, 12);
            CHECK(pair.negative(f) == 0.0);
        }
    }

    SUBCASE("V = -W with W positive gives positive part 0") {
        ClosedFormSpec spec;
        spec.name = "power";
        spec.params["p"] = {2.0};
        const Valuation w = kernel_valuation(Kernel::from_closed_form(spec, 12), space);
        const JordanPair pair = jordan_decompose(-1.0 * w, space);
        for (int t = 0; t < 10; ++t) {
            const LatticeFunction f = random_pos(rng, 12);
            CHECK(pair.positive(f) == 0.0);
            CHECK(std::abs(pair.negative(f) - w(f)) <= 1e-12 * (1.0 + w(f)));
        }
    }

    SUBCASE("pair invariants on mixed-sign kernels") {
        std::vector<std::function<double(double)>> h;
        for (int i = 0; i < 12; ++i) {
            const double a = rng.next_in(-2.0, 2.0);
            const double b = rng.next_in(0.5, 3.0);
            h.push_back([a, b](double s) { return a * std::sin(b * s); });
        }
        const Valuation v = per_atom_valuation(std::move(h), space);
        const JordanPair pair = jordan_decompose(v, space);
        for (int t = 0; t < 30; ++t) {
            const LatticeFunction f = random_pos(rng, 12);
            const LatticeFunction g = random_pos(rng, 12);
            const double vp = pair.positive(f);
            const double vm = pair.negative(f);
            CHECK(vp >= -1e-12);
            CHECK(vm >= -1e-12);
            CHECK(std::abs((vp - vm) - v(f)) <= 1e-12 * (1.0 + std::abs(v(f))));
            // V+ is a valuation (its per-atom kernel is the running max).
            CHECK(valuation_defect(pair.positive, f, g) <=
                  1e-9 * (1.0 + vp + pair.positive(g)));
            // Supremum property against sampled 0 <= g' <= f.
            LatticeFunction gp = f;
            for (auto& x : gp.values) x *= rng.next_unit();
            CHECK(vp >= v(gp) - 1e-9);
        }
    }

    SUBCASE("opaque evaluators are refused") {
        const Valuation opaque =
            opaque_valuation("op", 12, [](const LatticeFunction&) { return 0.0; });
        CHECK_THROWS_AS(jordan_decompose(opaque, space), InvalidInput);
    }
}
