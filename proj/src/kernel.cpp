#include "vallab/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "vallab/errors.hpp"

namespace vallab {

double interpolate_on_grid(const std::vector<double>& grid, const std::vector<double>& values,
                           double x) {
    if (x < grid.front() || x > grid.back())
        throw KernelRangeError("table evaluation outside the lambda grid");
    // upper_bound - 1 gives the left node; exact nodes return the tabulated
    // value so grid-valued inputs reproduce tables bit-for-bit.
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    std::size_t j = static_cast<std::size_t>(it - grid.begin());
    if (j > 0) --j;
    if (j + 1 >= grid.size()) j = grid.size() - 2;
    if (x == grid[j]) return values[j];
    if (x == grid[j + 1]) return values[j + 1];
    const double t = (x - grid[j]) / (grid[j + 1] - grid[j]);
    return values[j] + t * (values[j + 1] - values[j]);
}

Kernel Kernel::table(std::vector<double> lambda_grid, std::vector<std::vector<double>> values) {
    if (lambda_grid.size() < 2) throw InvalidInput("Kernel::table: grid needs >= 2 nodes");
    for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] < lambda_grid[i + 1]))
            throw InvalidInput("Kernel::table: lambda grid must be strictly increasing");
    auto zero_it = std::find(lambda_grid.begin(), lambda_grid.end(), 0.0);
    if (zero_it == lambda_grid.end())
        throw InvalidInput("Kernel::table: lambda grid must contain 0");
    const std::size_t zero_idx = static_cast<std::size_t>(zero_it - lambda_grid.begin());
    if (values.empty()) throw InvalidInput("Kernel::table: no atoms");
    for (const auto& row : values) {
        if (row.size() != lambda_grid.size())
            throw InvalidInput("Kernel::table: row length must match the grid");
        for (double v : row)
            if (!std::isfinite(v)) throw InvalidInput("Kernel::table: values must be finite");
        if (row[zero_idx] != 0.0)
            throw InvalidInput("Kernel::table: K(0, t) must be 0 for every atom");
    }
    Kernel k;
    k.is_table_ = true;
    k.lambda_grid_ = std::move(lambda_grid);
    k.values_ = std::move(values);
    return k;
}

Kernel Kernel::closed(std::vector<std::function<double(double)>> per_atom) {
    if (per_atom.empty()) throw InvalidInput("Kernel::closed: no atoms");
    for (const auto& f : per_atom) {
        if (!f) throw InvalidInput("Kernel::closed: empty function");
        if (f(0.0) != 0.0) throw InvalidInput("Kernel::closed: K(0, t) must be 0 for every atom");
    }
    Kernel k;
    k.funcs_ = std::move(per_atom);
    return k;
}

Kernel Kernel::closed_uniform(std::size_t atom_count, std::function<double(double)> f) {
    if (atom_count == 0) throw InvalidInput("Kernel::closed_uniform: no atoms");
    return closed(std::vector<std::function<double(double)>>(atom_count, std::move(f)));
}

namespace {

double param_at(const ClosedFormSpec& spec, const std::string& key, std::size_t atom,
                std::size_t atom_count, double fallback, bool required = false) {
    auto it = spec.params.find(key);
    if (it == spec.params.end() || it->second.empty()) {
        if (required) throw InvalidInput("kernel form '" + spec.name + "': missing param " + key);
        return fallback;
    }
    const auto& vec = it->second;
    if (vec.size() == 1) return vec[0];
    if (vec.size() != atom_count)
        throw InvalidInput("kernel form '" + spec.name + "': param " + key +
                           " must have 1 or atom_count entries");
    return vec[atom];
}

// The tent with peak 2^n at lambda = 2 and support [0, 4]; 0 off the
// positive axis.
double tent_phi(int n, double lambda) {
    if (lambda <= 0.0 || lambda > 4.0) return 0.0;
    const double scale = std::ldexp(1.0, n - 1); // 2^(n-1)
    if (lambda <= 2.0) return scale * lambda;
    return std::ldexp(1.0, n + 1) - scale * lambda;
}

} // namespace

Kernel Kernel::from_closed_form(const ClosedFormSpec& spec, std::size_t atom_count) {
    if (atom_count == 0) throw InvalidInput("Kernel::from_closed_form: no atoms");
    std::vector<std::function<double(double)>> funcs;
    funcs.reserve(atom_count);

    if (spec.name == "power") {
        for (std::size_t i = 0; i < atom_count; ++i) {
            const double p = param_at(spec, "p", i, atom_count, 2.0);
            const double scale = param_at(spec, "scale", i, atom_count, 1.0);
            if (!(p > 0.0)) throw InvalidInput("kernel form 'power': p must be > 0");
            funcs.push_back([p, scale](double l) { return scale * std::pow(std::abs(l), p); });
        }
    } else if (spec.name == "signed_power") {
        for (std::size_t i = 0; i < atom_count; ++i) {
            const double p = param_at(spec, "p", i, atom_count, 2.0);
            const double scale = param_at(spec, "scale", i, atom_count, 1.0);
            if (!(p > 0.0)) throw InvalidInput("kernel form 'signed_power': p must be > 0");
            funcs.push_back([p, scale](double l) {
                const double m = scale * std::pow(std::abs(l), p);
                return l < 0.0 ? -m : m;
            });
        }
    } else if (spec.name == "linear") {
        for (std::size_t i = 0; i < atom_count; ++i) {
            const double c = param_at(spec, "coeffs", i, atom_count,
                                      param_at(spec, "scale", i, atom_count, 1.0));
            funcs.push_back([c](double l) { return c * l; });
        }
    } else if (spec.name == "sine") {
        for (std::size_t i = 0; i < atom_count; ++i) {
            const double a = param_at(spec, "amplitude", i, atom_count, 1.0);
            const double b = param_at(spec, "frequency", i, atom_count, 1.0);
            funcs.push_back([a, b](double l) { return a * std::sin(b * l); });
        }
    } else if (spec.name == "tent_phi_n") {
        const double nb = param_at(spec, "n_blocks", 0, atom_count, 0.0, /*required=*/true);
        const int n_blocks = static_cast<int>(nb);
        if (n_blocks < 1) throw InvalidInput("kernel form 'tent_phi_n': n_blocks must be >= 1");
        if (atom_count != static_cast<std::size_t>(n_blocks) + 1)
            throw InvalidInput("kernel form 'tent_phi_n': atom_count must be n_blocks + 1");
        for (int n = 1; n <= n_blocks; ++n)
            funcs.push_back([n](double l) { return tent_phi(n, l); });
        funcs.push_back([](double) { return 0.0; }); // null remainder block
    } else {
        throw InvalidInput("unknown kernel closed form '" + spec.name + "'");
    }

    Kernel k = Kernel::closed(std::move(funcs));
    k.form_ = spec;
    return k;
}

std::size_t Kernel::atom_count() const { return is_table_ ? values_.size() : funcs_.size(); }

double Kernel::eval(std::size_t atom, double lambda) const {
    if (atom >= atom_count()) throw InvalidInput("Kernel::eval: atom index out of range");
    if (is_table_) return interpolate_on_grid(lambda_grid_, values_[atom], lambda);
    return funcs_[atom](lambda);
}

const std::vector<double>& Kernel::lambda_grid() const {
    if (!is_table_) throw InvalidInput("Kernel::lambda_grid: not a table kernel");
    return lambda_grid_;
}

const std::vector<std::vector<double>>& Kernel::table_values() const {
    if (!is_table_) throw InvalidInput("Kernel::table_values: not a table kernel");
    return values_;
}

} // namespace vallab
