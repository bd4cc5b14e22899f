#include "vallab/valuation.hpp"

#include <cmath>
#include <utility>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"
#include "vallab/rng.hpp"

namespace vallab {

double PerAtomForm::eval(const LatticeFunction& f) const {
    if (f.size() != weights.size()) throw InvalidInput("valuation: function/space size mismatch");
    KahanSum sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue; // h_i(0) = 0 by construction
        const double term = h[i](f[i]) * weights[i];
        if (term != 0.0) sum.add(term);
    }
    return sum.value();
}

double Valuation::Impl::eval(const LatticeFunction& f) const {
    if (form) return form->eval(f);
    return eval_fn(f);
}

Valuation Valuation::make(Impl impl) {
    auto shared = std::make_shared<const Impl>(std::move(impl));
    Valuation v(shared);
    const double at_zero = shared->eval(LatticeFunction::zeros(shared->dimension));
    if (at_zero != 0.0)
        throw InvalidInput("Valuation '" + shared->label + "': evaluator(0) must be 0, got " +
                           std::to_string(at_zero));
    return v;
}

Valuation::Valuation(std::string label, std::size_t dimension, Evaluator eval) {
    if (!eval) throw InvalidInput("Valuation: empty evaluator");
    Impl impl;
    impl.label = std::move(label);
    impl.dimension = dimension;
    impl.eval_fn = std::move(eval);
    *this = make(std::move(impl));
}

Valuation::Valuation(std::string label, PerAtomForm form) {
    if (form.h.size() != form.weights.size())
        throw InvalidInput("Valuation: per-atom form size mismatch");
    for (const auto& hi : form.h) {
        if (!hi) throw InvalidInput("Valuation: empty per-atom function");
        if (hi(0.0) != 0.0) throw InvalidInput("Valuation: per-atom h(0) must be 0");
    }
    Impl impl;
    impl.label = std::move(label);
    impl.dimension = form.weights.size();
    impl.form = std::move(form);
    *this = make(std::move(impl));
}

Valuation kernel_valuation(const Kernel& kernel, const MeasureSpace& space, std::string label) {
    if (kernel.atom_count() != space.atom_count())
        throw InvalidInput("kernel_valuation: kernel/space size mismatch");
    PerAtomForm form;
    form.weights = space.weights();
    form.h.reserve(space.atom_count());
    // Tables already validated K(0,.) = 0, so per-atom wrappers are direct.
    // One shared copy of the kernel; capturing it by value per atom would be
    // quadratic for closed-form kernels.
    auto shared = std::make_shared<const Kernel>(kernel);
    for (std::size_t i = 0; i < space.atom_count(); ++i)
        form.h.push_back([shared, i](double l) { return shared->eval(i, l); });

    Valuation::Impl impl;
    impl.label = std::move(label);
    impl.dimension = space.atom_count();
    impl.form = std::move(form);
    impl.kernel = kernel;
    return Valuation::make(std::move(impl));
}

Valuation per_atom_valuation(std::vector<std::function<double(double)>> h,
                             const MeasureSpace& space, std::string label) {
    if (h.size() != space.atom_count())
        throw InvalidInput("per_atom_valuation: function count/space size mismatch");
    PerAtomForm form;
    form.weights = space.weights();
    form.h = std::move(h);
    return Valuation(std::move(label), std::move(form));
}

Valuation theta_valuation(std::function<double(double)> theta, const MeasureSpace& space,
                          std::string label) {
    if (!theta) throw InvalidInput("theta_valuation: empty theta");
    return per_atom_valuation(
        std::vector<std::function<double(double)>>(space.atom_count(), theta), space,
        std::move(label));
}

Valuation linear_valuation(std::vector<double> coeffs, const MeasureSpace& space,
                           std::string label) {
    if (coeffs.size() != space.atom_count())
        throw InvalidInput("linear_valuation: coefficient count/space size mismatch");
    std::vector<std::function<double(double)>> h;
    h.reserve(coeffs.size());
    for (double c : coeffs) h.push_back([c](double l) { return c * l; });
    return per_atom_valuation(std::move(h), space, std::move(label));
}

Valuation opaque_valuation(std::string label, std::size_t dimension,
                           Valuation::Evaluator eval) {
    return Valuation(std::move(label), dimension, std::move(eval));
}

Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.dimension() != b.dimension()) throw InvalidInput("valuation sum: dimension mismatch");
    Valuation::Impl impl;
    impl.label = a.label() + "+" + b.label();
    impl.dimension = a.dimension();
    const PerAtomForm* fa = a.per_atom();
    const PerAtomForm* fb = b.per_atom();
    if (fa && fb && fa->weights == fb->weights) {
        PerAtomForm form;
        form.weights = fa->weights;
        form.h.reserve(fa->h.size());
        for (std::size_t i = 0; i < fa->h.size(); ++i) {
            auto ha = fa->h[i];
            auto hb = fb->h[i];
            form.h.push_back([ha, hb](double l) { return ha(l) + hb(l); });
        }
        impl.form = std::move(form);
    } else {
        impl.eval_fn = [a, b](const LatticeFunction& f) { return a(f) + b(f); };
    }
    return Valuation::make(std::move(impl));
}

Valuation operator*(double c, const Valuation& v) {
    if (!std::isfinite(c)) throw InvalidInput("valuation scaling: non-finite factor");
    Valuation::Impl impl;
    impl.label = v.label() + "*scaled";
    impl.dimension = v.dimension();
    if (const PerAtomForm* form = v.per_atom()) {
        PerAtomForm scaled;
        scaled.weights = form->weights;
        scaled.h.reserve(form->h.size());
        for (const auto& hi : form->h)
            scaled.h.push_back([c, hi](double l) { return c * hi(l); });
        impl.form = std::move(scaled);
    } else {
        impl.eval_fn = [c, v](const LatticeFunction& f) { return c * v(f); };
    }
    return Valuation::make(std::move(impl));
}

double valuation_defect(const Valuation& v, const LatticeFunction& f, const LatticeFunction& g) {
    if (f.size() != g.size()) throw InvalidInput("valuation_defect: length mismatch");
    return std::abs(v(join(f, g)) + v(meet(f, g)) - v(f) - v(g));
}

double orthogonality_defect(const Valuation& v, const LatticeFunction& f,
                            const LatticeFunction& g) {
    if (!is_disjoint(f, g)) throw InvalidInput("orthogonality_defect: pair is not disjoint");
    return std::abs(v(f + g) - v(f) - v(g));
}

Valuation extend_from_positive(std::string label, std::size_t dimension,
                               Valuation::Evaluator positive_cone_eval, ExtensionMode mode) {
    if (!positive_cone_eval) throw InvalidInput("extend_from_positive: empty evaluator");
    auto vp = std::move(positive_cone_eval);
    Valuation::Evaluator extended;
    if (mode == ExtensionMode::difference) {
        extended = [vp](const LatticeFunction& f) {
            const AbsParts parts = abs_parts(f);
            return vp(parts.pos) - vp(parts.neg);
        };
    } else {
        extended = [vp](const LatticeFunction& f) { return vp(abs_parts(f).pos); };
    }
    return Valuation(std::move(label), dimension, std::move(extended));
}

std::pair<Valuation, Valuation> split_valuation(const Valuation& v) {
    const std::size_t n = v.dimension();
    Valuation v1(v.label() + "+join0", n, [v](const LatticeFunction& f) {
        return v(join(f, LatticeFunction::zeros(f.size())));
    });
    Valuation v2(v.label() + "+meet0", n, [v](const LatticeFunction& f) {
        return v(meet(f, LatticeFunction::zeros(f.size())));
    });
    return {std::move(v1), std::move(v2)};
}

std::vector<ModulusRow> continuity_modulus(const Valuation& v, const LatticeFunction& f,
                                           const MeasureSpace& space, const NormSpec& spec,
                                           const std::vector<double>& radii, long trials,
                                           std::uint64_t seed) {
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        if (radii[k] < radii[k + 1])
            throw InvalidInput("continuity_modulus: radii must be sorted decreasing");
    for (double r : radii)
        if (r < 0.0) throw InvalidInput("continuity_modulus: radii must be nonnegative");

    const double base = v(f);
    std::vector<ModulusRow> table;
    table.reserve(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double r = radii[k];
        double max_delta = 0.0;
        for (long t = 0; t < trials; ++t) {
            Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(t) * radii.size() + k));
            LatticeFunction h = LatticeFunction::zeros(f.size());
            for (auto& x : h.values) x = rng.next_in(-1.0, 1.0);
            const double hn = norm(space, h, spec);
            if (hn > 0.0 && r > 0.0) {
                const double target = r * rng.next_unit();
                h = (target / hn) * h;
            } else {
                h = LatticeFunction::zeros(f.size());
            }
            max_delta = std::max(max_delta, std::abs(base - v(f + h)));
        }
        table.push_back(ModulusRow{r, max_delta});
    }
    return table;
}

} // namespace vallab
