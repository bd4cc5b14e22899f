#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vallab {

/// Serialization metadata for kernels built from a named closed form.
/// Parameters are stored as vectors: a length-1 vector broadcasts to all
/// atoms, a length-n vector is per-atom.
struct ClosedFormSpec {
    std::string name;
    std::map<std::string, std::vector<double>> params;
};

/// Strong Caratheodory datum on a discrete space: one continuous scalar
/// function lambda -> K(lambda, t_i) per atom, either a named/ad-hoc closed
/// form or a shared piecewise-linear table. K(0, t_i) = 0 for every atom.
/// Table kernels refuse evaluation outside their lambda grid; callers must
/// build grids covering their data.
class Kernel {
public:
    static Kernel table(std::vector<double> lambda_grid,
                        std::vector<std::vector<double>> values);

    static Kernel closed(std::vector<std::function<double(double)>> per_atom);
    static Kernel closed_uniform(std::size_t atom_count, std::function<double(double)> f);

    /// Named closed forms: "power" (scale*|l|^p, p>0), "signed_power"
    /// (scale*sign(l)*|l|^p), "linear" (coeffs_i * l), "sine"
    /// (amplitude*sin(frequency*l)), "tent_phi_n" (n_blocks tents + null
    /// remainder atom).
    static Kernel from_closed_form(const ClosedFormSpec& spec, std::size_t atom_count);

    std::size_t atom_count() const;
    bool is_table() const { return is_table_; }

    double eval(std::size_t atom, double lambda) const;

    // Table accessors; InvalidInput on closed-form kernels.
    const std::vector<double>& lambda_grid() const;
    const std::vector<std::vector<double>>& table_values() const;

    bool has_closed_form_spec() const { return !form_.name.empty(); }
    const ClosedFormSpec& closed_form_spec() const { return form_; }

private:
    Kernel() = default;

    bool is_table_ = false;
    std::vector<double> lambda_grid_;
    std::vector<std::vector<double>> values_; // [atom][grid node]
    std::vector<std::function<double(double)>> funcs_;
    ClosedFormSpec form_;
};

/// Linear interpolation on a shared grid; exact at grid nodes; throws
/// KernelRangeError outside [grid.front(), grid.back()].
double interpolate_on_grid(const std::vector<double>& grid, const std::vector<double>& values,
                           double x);

} // namespace vallab
