#include "vallab/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "vallab/errors.hpp"
#include "vallab/numeric.hpp"

namespace vallab {

LatticeFunction::LatticeFunction(std::vector<double> v) : values(std::move(v)) {
    for (double x : values)
        if (!std::isfinite(x)) throw InvalidInput("LatticeFunction: entries must be finite");
}

LatticeFunction LatticeFunction::zeros(std::size_t n) {
    LatticeFunction f;
    f.values.assign(n, 0.0);
    return f;
}

LatticeFunction LatticeFunction::constant(std::size_t n, double c) {
    if (!std::isfinite(c)) throw InvalidInput("LatticeFunction: entries must be finite");
    LatticeFunction f;
    f.values.assign(n, c);
    return f;
}

namespace {
void require_same_size(const LatticeFunction& a, const LatticeFunction& b, const char* op) {
    if (a.size() != b.size()) throw InvalidInput(std::string(op) + ": length mismatch");
}
} // namespace

LatticeFunction operator+(const LatticeFunction& a, const LatticeFunction& b) {
    require_same_size(a, b, "operator+");
    LatticeFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

LatticeFunction operator-(const LatticeFunction& a, const LatticeFunction& b) {
    require_same_size(a, b, "operator-");
    LatticeFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

LatticeFunction operator*(double c, const LatticeFunction& f) {
    LatticeFunction out = f;
    for (auto& x : out.values) x *= c;
    return out;
}

LatticeFunction indicator(std::size_t atom_count, const MeasurableSet& a) {
    return scaled_indicator(atom_count, 1.0, a);
}

LatticeFunction scaled_indicator(std::size_t atom_count, double lambda, const MeasurableSet& a) {
    LatticeFunction f = LatticeFunction::zeros(atom_count);
    for (std::size_t i : a.indices()) {
        if (i >= atom_count) throw InvalidInput("scaled_indicator: index out of range");
        f[i] = lambda;
    }
    return f;
}

LatticeFunction restrict_to(const LatticeFunction& f, const MeasurableSet& a) {
    LatticeFunction out = LatticeFunction::zeros(f.size());
    for (std::size_t i : a.indices()) {
        if (i >= f.size()) throw InvalidInput("restrict_to: index out of range");
        out[i] = f[i];
    }
    return out;
}

LatticeFunction restrict_to_chunk(const MeasureSpace& space, const LatticeFunction& f,
                                  std::size_t chunk_index) {
    if (!space.chunked()) throw InvalidInput("restrict_to_chunk: space has no chunks");
    if (chunk_index >= space.chunk_prefixes().size())
        throw InvalidInput("restrict_to_chunk: chunk index out of range");
    if (f.size() != space.atom_count())
        throw InvalidInput("restrict_to_chunk: function/space size mismatch");
    const std::size_t prefix = space.chunk_prefixes()[chunk_index];
    LatticeFunction out = LatticeFunction::zeros(f.size());
    for (std::size_t i = 0; i < prefix; ++i) out[i] = f[i];
    return out;
}

LatticeFunction join(const LatticeFunction& f, const LatticeFunction& g) {
    require_same_size(f, g, "join");
    LatticeFunction out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(f[i], g[i]);
    return out;
}

LatticeFunction meet(const LatticeFunction& f, const LatticeFunction& g) {
    require_same_size(f, g, "meet");
    LatticeFunction out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(f[i], g[i]);
    return out;
}

AbsParts abs_parts(const LatticeFunction& f) {
    AbsParts parts{LatticeFunction::zeros(f.size()), LatticeFunction::zeros(f.size()),
                   LatticeFunction::zeros(f.size())};
    for (std::size_t i = 0; i < f.size(); ++i) {
        parts.pos[i] = std::max(f[i], 0.0);
        parts.neg[i] = std::max(-f[i], 0.0);
        parts.abs[i] = parts.pos[i] + parts.neg[i];
    }
    return parts;
}

bool is_disjoint(const LatticeFunction& f, const LatticeFunction& g) {
    require_same_size(f, g, "is_disjoint");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0.0 && g[i] != 0.0) return false;
    return true;
}

LatticeFunction band_projection(const LatticeFunction& x, const LatticeFunction& y) {
    require_same_size(x, y, "band_projection");
    LatticeFunction out = LatticeFunction::zeros(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (x[i] < 0.0) throw InvalidInput("band_projection: x must be nonnegative");
        out[i] = (x[i] != 0.0) ? y[i] : 0.0;
    }
    return out;
}

double OrliczPhi::operator()(double u) const {
    switch (kind) {
        case Kind::power:
            return std::pow(u, p);
        case Kind::exp_minus_one:
            return std::expm1(u);
    }
    return 0.0;
}

OrliczPhi OrliczPhi::power(double p) {
    if (!(p >= 1.0)) throw InvalidInput("OrliczPhi::power: p must be >= 1");
    return OrliczPhi{Kind::power, p};
}

OrliczPhi OrliczPhi::exp_minus_one() { return OrliczPhi{Kind::exp_minus_one, 1.0}; }

NormSpec NormSpec::lp(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("NormSpec::lp: p must be >= 1");
    NormSpec s;
    s.variant_ = Variant::lp;
    s.p_ = p;
    return s;
}

NormSpec NormSpec::sup() {
    NormSpec s;
    s.variant_ = Variant::sup;
    return s;
}

NormSpec NormSpec::orlicz(OrliczPhi phi) {
    NormSpec s;
    s.variant_ = Variant::orlicz;
    s.phi_ = phi;
    return s;
}

namespace {

double lp_norm(const MeasureSpace& space, const LatticeFunction& f, double p) {
    KahanSum sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        sum.add(std::pow(std::abs(f[i]), p) * space.weight(i));
    }
    return std::pow(sum.value(), 1.0 / p);
}

double sup_norm(const LatticeFunction& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

// Luxemburg gauge by monotone bisection. G(s) = sum phi(|f_i|/s) mu_i is
// strictly decreasing in s on the support of f; the returned value keeps
// G(result) <= 1.
double orlicz_norm(const MeasureSpace& space, const LatticeFunction& f, const OrliczPhi& phi) {
    const double fmax = sup_norm(f);
    if (fmax == 0.0) return 0.0;

    auto gauge = [&](double s) {
        KahanSum sum;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 0.0) continue;
            sum.add(phi(std::abs(f[i]) / s) * space.weight(i));
        }
        return sum.value();
    };

    double hi = fmax;
    int guard = 0;
    while (gauge(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi))
            throw ConvergenceError("orlicz_norm: bracketing diverged");
    }
    double lo = hi / 2.0;
    guard = 0;
    while (lo > 0.0 && gauge(lo) <= 1.0) {
        hi = lo;
        lo /= 2.0;
        if (++guard > 2000) throw ConvergenceError("orlicz_norm: bracketing diverged");
    }
    if (lo == 0.0) return hi; // gauge <= 1 arbitrarily close to 0

    const double rel_tol = 1e-12;
    guard = 0;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at floating-point resolution
        if (gauge(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
        if (++guard > 20000) throw ConvergenceError("orlicz_norm: bisection stalled");
    }
    return hi;
}

} // namespace

double norm(const MeasureSpace& space, const LatticeFunction& f, const NormSpec& spec) {
    if (f.size() != space.atom_count()) throw InvalidInput("norm: function/space size mismatch");
    switch (spec.variant()) {
        case NormSpec::Variant::lp:
            return lp_norm(space, f, spec.p());
        case NormSpec::Variant::sup:
            return sup_norm(f);
        case NormSpec::Variant::orlicz:
            return orlicz_norm(space, f, spec.phi());
    }
    throw InvalidInput("norm: unknown variant");
}

double lower_q_estimate_ratio(const MeasureSpace& space,
                              const std::vector<LatticeFunction>& family, double q,
                              const NormSpec& spec) {
    if (family.empty()) throw InvalidInput("lower_q_estimate_ratio: empty family");
    if (!(q >= 1.0)) throw InvalidInput("lower_q_estimate_ratio: q must be >= 1");

    // Pairwise disjointness via per-atom support counting.
    std::vector<int> support_count(space.atom_count(), 0);
    for (const auto& x : family) {
        if (x.size() != space.atom_count())
            throw InvalidInput("lower_q_estimate_ratio: function/space size mismatch");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0.0 && ++support_count[i] > 1)
                throw InvalidInput("lower_q_estimate_ratio: family is not pairwise disjoint");
    }

    LatticeFunction total = LatticeFunction::zeros(space.atom_count());
    for (const auto& x : family) total = total + x;
    const double denom = norm(space, total, spec);
    if (denom == 0.0) throw InvalidInput("lower_q_estimate_ratio: zero-sum family");

    KahanSum qsum;
    for (const auto& x : family) qsum.add(std::pow(norm(space, x, spec), q));
    return std::pow(qsum.value(), 1.0 / q) / denom;
}

QEstimateReport aggregate_q_estimate(const MeasureSpace& space,
                                     const std::vector<std::vector<LatticeFunction>>& families,
                                     double q, const NormSpec& spec) {
    QEstimateReport report;
    report.q = q;
    report.best_ratio = 0.0;
    for (const auto& family : families) {
        const double ratio = lower_q_estimate_ratio(space, family, q, spec);
        if (ratio > report.best_ratio) {
            report.best_ratio = ratio;
            report.witness_family = family;
        }
    }
    return report;
}

} // namespace vallab
