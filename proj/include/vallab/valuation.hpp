#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vallab/kernel.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"

namespace vallab {

/// The orthogonally additive normal form on a discrete space:
/// V(f) = sum_i h_i(f_i) mu_i with h_i(0) = 0. Every valuation on these
/// models decomposes like this, so it is the decomposable payload behind
/// kernel, theta and per-atom black-box valuations.
struct PerAtomForm {
    std::vector<double> weights;
    std::vector<std::function<double(double)>> h;

    std::size_t atom_count() const { return weights.size(); }
    double eval(const LatticeFunction& f) const; // compensated sum, zero entries skipped
};

/// Evaluator contract f -> R with V(0) = 0 (checked at construction).
/// Immutable value type; evaluators must be pure and reentrant.
class Valuation {
public:
    using Evaluator = std::function<double(const LatticeFunction&)>;

    Valuation(std::string label, std::size_t dimension, Evaluator eval);
    Valuation(std::string label, PerAtomForm form);

    double operator()(const LatticeFunction& f) const { return impl_->eval(f); }

    const std::string& label() const { return impl_->label; }
    std::size_t dimension() const { return impl_->dimension; }

    /// Non-null iff the valuation is per-atom decomposable.
    const PerAtomForm* per_atom() const { return impl_->form ? &*impl_->form : nullptr; }
    /// Non-null iff the valuation was built from an explicit kernel.
    const Kernel* kernel() const { return impl_->kernel ? &*impl_->kernel : nullptr; }

private:
    struct Impl {
        std::string label;
        std::size_t dimension = 0;
        Evaluator eval_fn;
        std::optional<PerAtomForm> form;
        std::optional<Kernel> kernel;

        double eval(const LatticeFunction& f) const;
    };

    explicit Valuation(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    static Valuation make(Impl impl);

    std::shared_ptr<const Impl> impl_;

    friend Valuation kernel_valuation(const Kernel&, const MeasureSpace&, std::string);
    friend Valuation per_atom_valuation(std::vector<std::function<double(double)>>,
                                        const MeasureSpace&, std::string);
    friend Valuation operator+(const Valuation&, const Valuation&);
    friend Valuation operator*(double, const Valuation&);
};

/// V(f) = sum_i K(f_i, t_i) mu_i.
Valuation kernel_valuation(const Kernel& kernel, const MeasureSpace& space,
                           std::string label = "kernel");

/// V(f) = sum_i h_i(f_i) mu_i for arbitrary continuous h_i with h_i(0) = 0.
Valuation per_atom_valuation(std::vector<std::function<double(double)>> h,
                             const MeasureSpace& space, std::string label = "per-atom");

/// V(f) = sum_i theta(f_i) mu_i (atom-independent kernel).
Valuation theta_valuation(std::function<double(double)> theta, const MeasureSpace& space,
                          std::string label = "theta");

/// The linear functional V(f) = sum_i c_i f_i mu_i.
Valuation linear_valuation(std::vector<double> coeffs, const MeasureSpace& space,
                           std::string label = "linear");

/// Fully opaque evaluator; excluded from decomposition paths.
Valuation opaque_valuation(std::string label, std::size_t dimension, Valuation::Evaluator eval);

// Valuations carry a linear structure; per-atom forms are preserved when
// both operands have them.
Valuation operator+(const Valuation& a, const Valuation& b);
Valuation operator*(double c, const Valuation& v);

/// |V(f v g) + V(f ^ g) - V(f) - V(g)|. Absolute; tolerances are the
/// harness's business.
double valuation_defect(const Valuation& v, const LatticeFunction& f, const LatticeFunction& g);

/// |V(f + g) - V(f) - V(g)| for disjoint f, g; rejects non-disjoint pairs.
double orthogonality_defect(const Valuation& v, const LatticeFunction& f,
                            const LatticeFunction& g);

enum class ExtensionMode { difference, join_zero };

/// Extend a positive-cone valuation to all of E: difference mode
/// V(f_+) - V(f_-), join_zero mode V(f v 0).
Valuation extend_from_positive(std::string label, std::size_t dimension,
                               Valuation::Evaluator positive_cone_eval, ExtensionMode mode);

/// V_1(f) = V(f v 0), V_2(f) = V(f ^ 0); V = V_1 + V_2 for valuations.
std::pair<Valuation, Valuation> split_valuation(const Valuation& v);

struct DefectReport {
    double max_defect = 0.0;
    std::vector<LatticeFunction> witness; // inputs achieving the max
    long trials = 0;
    std::uint64_t seed = 0;
};

struct ModulusRow {
    double radius = 0.0;
    double max_delta = 0.0;
};

/// Empirical continuity modulus around f: for each radius r (given sorted
/// decreasing), max |V(f) - V(f+h)| over sampled h with norm(h) <= r.
std::vector<ModulusRow> continuity_modulus(const Valuation& v, const LatticeFunction& f,
                                           const MeasureSpace& space, const NormSpec& spec,
                                           const std::vector<double>& radii, long trials,
                                           std::uint64_t seed);

} // namespace vallab
