#include "vallab/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vallab/errors.hpp"
#include "vallab/lattice.hpp"
#include "vallab/numeric.hpp"
#include "vallab/rng.hpp"

namespace vallab {

MeasurableSet::MeasurableSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw InvalidInput("MeasurableSet: duplicate atom index");
}

MeasurableSet MeasurableSet::full(std::size_t atom_count) {
    std::vector<std::size_t> idx(atom_count);
    for (std::size_t i = 0; i < atom_count; ++i) idx[i] = i;
    return MeasurableSet(std::move(idx));
}

bool MeasurableSet::contains(std::size_t i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(),
                   b.indices().end(), std::back_inserter(out));
    return MeasurableSet(std::move(out));
}

MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b) {
    std::vector<std::size_t> out;
    std::set_intersection(a.indices().begin(), a.indices().end(), b.indices().begin(),
                          b.indices().end(), std::back_inserter(out));
    return MeasurableSet(std::move(out));
}

MeasurableSet set_complement(const MeasurableSet& a, std::size_t atom_count) {
    std::vector<std::size_t> out;
    out.reserve(atom_count - a.size());
    std::size_t k = 0;
    const auto& idx = a.indices();
    for (std::size_t i = 0; i < atom_count; ++i) {
        if (k < idx.size() && idx[k] == i) {
            ++k;
        } else {
            out.push_back(i);
        }
    }
    return MeasurableSet(std::move(out));
}

MeasureSpace::MeasureSpace(std::vector<double> weights, std::vector<std::size_t> chunk_prefixes,
                           bool nonatomic_surrogate, bool mass_declared_infinite)
    : weights_(std::move(weights)),
      chunks_(std::move(chunk_prefixes)),
      nonatomic_(nonatomic_surrogate),
      mass_declared_infinite_(mass_declared_infinite) {
    if (weights_.empty()) throw InvalidInput("MeasureSpace: no atoms");
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw InvalidInput("MeasureSpace: weights must be strictly positive and finite");
    if (!chunks_.empty()) {
        for (std::size_t k = 0; k + 1 < chunks_.size(); ++k)
            if (chunks_[k] >= chunks_[k + 1])
                throw InvalidInput("MeasureSpace: chunk prefixes must strictly increase");
        if (chunks_.front() == 0 || chunks_.back() != weights_.size())
            throw InvalidInput("MeasureSpace: chunks must be nonempty prefixes exhausting all atoms");
    }
    if (mass_declared_infinite_ && chunks_.empty())
        throw InvalidInput("MeasureSpace: infinite mass is only representable via chunking");
    KahanSum total;
    for (double w : weights_) total.add(w);
    total_mass_ = total.value();
}

MeasureSpace MeasureSpace::uniform_grid(std::size_t n, double total_mass) {
    if (n == 0) throw InvalidInput("uniform_grid: n must be >= 1");
    if (!(total_mass > 0.0) || !std::isfinite(total_mass))
        throw InvalidInput("uniform_grid: total mass must be positive and finite");
    return MeasureSpace(std::vector<double>(n, total_mass / static_cast<double>(n)), {},
                        /*nonatomic_surrogate=*/true);
}

double MeasureSpace::granularity() const {
    const double wmax = *std::max_element(weights_.begin(), weights_.end());
    return wmax / total_mass_;
}

bool MeasureSpace::uniform_weights() const {
    for (double w : weights_)
        if (w != weights_.front()) return false;
    return true;
}

double MeasureSpace::measure(const MeasurableSet& set) const {
    KahanSum sum;
    for (std::size_t i : set.indices()) {
        if (i >= weights_.size()) throw InvalidInput("measure: atom index out of range");
        sum.add(weights_[i]);
    }
    return sum.value();
}

double symdiff_distance(const MeasureSpace& space, const MeasurableSet& a,
                        const MeasurableSet& b) {
    const auto& ia = a.indices();
    const auto& ib = b.indices();
    KahanSum sum;
    std::size_t pa = 0, pb = 0;
    auto take = [&](std::size_t i) {
        if (i >= space.atom_count())
            throw InvalidInput("symdiff_distance: set does not belong to this space");
        sum.add(space.weight(i));
    };
    while (pa < ia.size() || pb < ib.size()) {
        if (pb == ib.size() || (pa < ia.size() && ia[pa] < ib[pb])) {
            take(ia[pa++]);
        } else if (pa == ia.size() || ib[pb] < ia[pa]) {
            take(ib[pb++]);
        } else {
            ++pa;
            ++pb;
        }
    }
    return sum.value();
}

MeasurableSet equal_measure_transport(const MeasurableSet& a, const MeasureSpace& space,
                                      std::uint64_t seed) {
    if (!space.uniform_weights())
        throw InvalidInput("equal_measure_transport: requires equal-weight atoms");
    if (!a.indices().empty() && a.indices().back() >= space.atom_count())
        throw InvalidInput("equal_measure_transport: set does not belong to this space");
    Rng rng(seed);
    return MeasurableSet(sample_indices(rng, space.atom_count(), a.size()));
}

std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    if (k > n) throw InvalidInput("sample_indices: k > n");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

namespace {

// Largest single-atom norm contribution among the eligible atoms, expressed
// as the certified slack: achieved >= delta * (1 - slack) whenever the
// greedy pass has to skip an atom. Lp uses the tight p-th power form; sup
// and Orlicz fall back to the triangle inequality.
double certified_slack(const MeasureSpace& space, const LatticeFunction& f, double delta,
                       const NormSpec& spec, const std::vector<char>& eligible) {
    double slack = 0.0;
    if (spec.variant() == NormSpec::Variant::lp) {
        const double p = spec.p();
        const double delta_p = std::pow(delta, p);
        double cmax = 0.0;
        for (std::size_t i = 0; i < space.atom_count(); ++i) {
            if (!eligible[i] || f[i] == 0.0) continue;
            cmax = std::max(cmax, std::pow(std::abs(f[i]), p) * space.weight(i));
        }
        if (cmax >= delta_p) return 1.0; // certificate void
        slack = 1.0 - std::pow(1.0 - cmax / delta_p, 1.0 / p);
    } else if (spec.variant() == NormSpec::Variant::sup) {
        double nmax = 0.0;
        for (std::size_t i = 0; i < space.atom_count(); ++i)
            if (eligible[i]) nmax = std::max(nmax, std::abs(f[i]));
        if (nmax >= delta) return 1.0;
        slack = nmax / delta;
    } else {
        double nmax = 0.0;
        for (std::size_t i = 0; i < space.atom_count(); ++i) {
            if (!eligible[i] || f[i] == 0.0) continue;
            LatticeFunction single = LatticeFunction::zeros(space.atom_count());
            single[i] = f[i];
            nmax = std::max(nmax, norm(space, single, spec));
        }
        if (nmax >= delta) return 1.0;
        slack = nmax / delta;
    }
    return slack;
}

} // namespace

SubsetSearchResult find_subset_with_target_norm(const MeasureSpace& space,
                                                const LatticeFunction& f, double delta,
                                                const NormSpec& spec,
                                                const MeasurableSet& forbidden) {
    if (f.size() != space.atom_count())
        throw InvalidInput("find_subset_with_target_norm: function/space size mismatch");
    if (!(delta > 0.0)) throw InvalidInput("find_subset_with_target_norm: delta must be positive");
    if (!space.nonatomic_surrogate())
        throw InvalidInput("find_subset_with_target_norm: space must be a non-atomic surrogate");

    const std::size_t n = space.atom_count();
    std::vector<char> eligible(n, 1);
    for (std::size_t i : forbidden.indices()) {
        if (i >= n) throw InvalidInput("find_subset_with_target_norm: forbidden set out of range");
        eligible[i] = 0;
    }

    const double slack = certified_slack(space, f, delta, spec, eligible);
    if (slack >= 1.0)
        throw GridTooCoarse(
            "find_subset_with_target_norm: a single atom exceeds the slack budget");

    LatticeFunction masked = LatticeFunction::zeros(n);
    for (std::size_t i = 0; i < n; ++i)
        if (eligible[i]) masked[i] = f[i];
    const double reachable = norm(space, masked, spec);
    if (reachable < delta * (1.0 - slack))
        throw TargetUnreachable("find_subset_with_target_norm: eligible mass below target");

    // Greedy accumulation in atom-index order. For Lp the running p-th power
    // sum is bit-identical to what norm() would compute on the same set, so
    // the hard upper bound holds by the same comparison; for other variants
    // the candidate norm is recomputed outright.
    std::vector<std::size_t> picked;
    if (spec.variant() == NormSpec::Variant::lp) {
        const double p = spec.p();
        const double delta_p = std::pow(delta, p);
        KahanSum power_sum;
        for (std::size_t i = 0; i < n; ++i) {
            if (!eligible[i] || f[i] == 0.0) continue;
            const double c = std::pow(std::abs(f[i]), p) * space.weight(i);
            KahanSum trial = power_sum;
            trial.add(c);
            if (trial.value() <= delta_p) {
                power_sum = trial;
                picked.push_back(i);
            }
        }
    } else {
        LatticeFunction current = LatticeFunction::zeros(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!eligible[i] || f[i] == 0.0) continue;
            current[i] = f[i];
            if (norm(space, current, spec) <= delta) {
                picked.push_back(i);
            } else {
                current[i] = 0.0;
            }
        }
    }

    MeasurableSet result(std::move(picked));
    double achieved = norm(space, restrict_to(f, result), spec);
    // The greedy comparisons guarantee achieved <= delta up to the rounding
    // of the final norm evaluation; trim if that last rounding lands above.
    while (achieved > delta && !result.indices().empty()) {
        std::vector<std::size_t> trimmed = result.indices();
        trimmed.pop_back();
        result = MeasurableSet(std::move(trimmed));
        achieved = norm(space, restrict_to(f, result), spec);
    }
    return SubsetSearchResult{std::move(result), achieved, slack};
}

} // namespace vallab
