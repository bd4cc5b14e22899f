#include "vallab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"

namespace vallab {

namespace {

constexpr int kScanIntervals = 1000;
constexpr double kRefineTol = 1e-10;

// Max of a continuous scalar function over [0, x]: dense scan, then ternary
// refinement of the bracket around the best sample. K is only assumed
// continuous, so nothing derivative-based is justified here.
double scan_max(const std::function<double(double)>& func, double x) {
    if (x == 0.0) return func(0.0);
    double best_val = -std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (int j = 0; j <= kScanIntervals; ++j) {
        const double s = x * (static_cast<double>(j) / kScanIntervals);
        const double val = func(s);
        if (val > best_val) {
            best_val = val;
            best_j = j;
        }
    }
    double lo = x * (static_cast<double>(std::max(0, best_j - 1)) / kScanIntervals);
    double hi = x * (static_cast<double>(std::min(kScanIntervals, best_j + 1)) / kScanIntervals);
    const double tol = kRefineTol * std::max(1.0, x);
    while (hi - lo > tol) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (func(m1) < func(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best_val, func(0.5 * (lo + hi)));
}

// Exact max for a piecewise-linear table on [0, x]: covered grid nodes plus
// the interpolated right endpoint.
double table_max(const std::vector<double>& grid, const std::vector<double>& values, double x) {
    double best = interpolate_on_grid(grid, values, x); // also validates range
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] < 0.0) continue;
        if (grid[j] > x) break;
        best = std::max(best, values[j]);
    }
    return best;
}

std::function<double(double)> positive_part_scalar(const std::shared_ptr<const Kernel>& kernel,
                                                   std::size_t atom) {
    if (kernel->is_table()) {
        const auto& grid = kernel->lambda_grid();
        const auto& values = kernel->table_values()[atom];
        return [grid, values](double x) {
            if (x < 0.0) throw InvalidInput("positive part: argument must be nonnegative");
            return table_max(grid, values, x);
        };
    }
    return [kernel, atom](double x) {
        if (x < 0.0) throw InvalidInput("positive part: argument must be nonnegative");
        return scan_max([&](double s) { return kernel->eval(atom, s); }, x);
    };
}

void require_nonnegative(const LatticeFunction& f, const char* who) {
    for (double x : f.values)
        if (x < 0.0) throw InvalidInput(std::string(who) + ": f must be nonnegative");
}

} // namespace

double positive_part_kernel(const Kernel& kernel, const LatticeFunction& f,
                            const MeasureSpace& space) {
    if (kernel.atom_count() != space.atom_count() || f.size() != space.atom_count())
        throw InvalidInput("positive_part_kernel: size mismatch");
    require_nonnegative(f, "positive_part_kernel");
    KahanSum sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue; // sup over [0,0] is K(0) = 0
        double m;
        if (kernel.is_table())
            m = table_max(kernel.lambda_grid(), kernel.table_values()[i], f[i]);
        else
            m = scan_max([&](double s) { return kernel.eval(i, s); }, f[i]);
        const double term = m * space.weight(i);
        if (term != 0.0) sum.add(term);
    }
    return sum.value();
}

double positive_part_bruteforce(const Valuation& v, const LatticeFunction& f,
                                long grid_points) {
    const PerAtomForm* form = v.per_atom();
    if (!form)
        throw InvalidInput("positive_part_bruteforce: valuation is not per-atom decomposable");
    if (grid_points < 2) throw InvalidInput("positive_part_bruteforce: grid_points must be >= 2");
    if (f.size() != form->atom_count()) throw InvalidInput("positive_part_bruteforce: size mismatch");
    require_nonnegative(f, "positive_part_bruteforce");
    KahanSum sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        double best = 0.0; // s = 0 is always feasible and h_i(0) = 0
        for (long j = 0; j < grid_points; ++j) {
            const double s = f[i] * (static_cast<double>(j) / static_cast<double>(grid_points - 1));
            best = std::max(best, form->h[i](s));
        }
        const double term = best * form->weights[i];
        if (term != 0.0) sum.add(term);
    }
    return sum.value();
}

JordanPair jordan_decompose(const Valuation& v, const MeasureSpace& space) {
    const PerAtomForm* form = v.per_atom();
    if (!form)
        throw InvalidInput(
            "jordan_decompose: refusing an opaque evaluator; the supremum over an order "
            "interval is only computable for per-atom decomposable valuations");
    if (form->atom_count() != space.atom_count())
        throw InvalidInput("jordan_decompose: valuation/space size mismatch");

    // V+ is again per-atom: its kernel is x -> max_{0<=s<=x} h_i(s). The
    // exact node-max path is used when the source kernel is a table.
    std::vector<std::function<double(double)>> h_plus;
    h_plus.reserve(form->atom_count());
    const Kernel* kernel = v.kernel();
    std::shared_ptr<const Kernel> shared_kernel;
    if (kernel && kernel->is_table()) shared_kernel = std::make_shared<const Kernel>(*kernel);
    for (std::size_t i = 0; i < form->atom_count(); ++i) {
        if (shared_kernel) {
            h_plus.push_back(positive_part_scalar(shared_kernel, i));
        } else {
            auto hi = form->h[i];
            h_plus.push_back([hi](double x) {
                if (x < 0.0) throw InvalidInput("positive part: argument must be nonnegative");
                return scan_max(hi, x);
            });
        }
    }
    Valuation positive = per_atom_valuation(std::move(h_plus), space, v.label() + "^+");
    Valuation negative = opaque_valuation(
        v.label() + "^-", v.dimension(),
        [positive, v](const LatticeFunction& f) { return positive(f) - v(f); });
    return JordanPair{std::move(positive), std::move(negative), v};
}

} // namespace vallab
