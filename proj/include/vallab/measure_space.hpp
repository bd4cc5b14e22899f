#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vallab {

struct LatticeFunction;
class NormSpec;

/// A measurable set is a sorted list of atom indices of the owning space.
class MeasurableSet {
public:
    MeasurableSet() = default;
    explicit MeasurableSet(std::vector<std::size_t> indices); // sorts; rejects duplicates

    static MeasurableSet empty() { return MeasurableSet{}; }
    static MeasurableSet full(std::size_t atom_count);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool is_empty() const { return indices_.empty(); }
    bool contains(std::size_t i) const;

    bool operator==(const MeasurableSet& other) const { return indices_ == other.indices_; }

private:
    std::vector<std::size_t> indices_;
};

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_complement(const MeasurableSet& a, std::size_t atom_count);

/// Finite weighted-atom model of a sigma-finite measure space. Chunks are
/// strictly increasing atom-index prefixes exhausting all atoms; an empty
/// chunk list means plain finite mode. A space flagged as a non-atomic
/// surrogate is a fine grid standing in for a non-atomic space, with the
/// granularity eta = max weight / total mass recorded.
class MeasureSpace {
public:
    MeasureSpace(std::vector<double> weights,
                 std::vector<std::size_t> chunk_prefixes = {},
                 bool nonatomic_surrogate = false,
                 bool mass_declared_infinite = false);

    static MeasureSpace uniform_grid(std::size_t n, double total_mass);

    std::size_t atom_count() const { return weights_.size(); }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const { return total_mass_; }
    // Convention for unbounded sigma-finite models: the atom list is always
    // finite, the flag records that the modeled mass is infinite.
    bool mass_declared_infinite() const { return mass_declared_infinite_; }

    bool chunked() const { return !chunks_.empty(); }
    const std::vector<std::size_t>& chunk_prefixes() const { return chunks_; }

    bool nonatomic_surrogate() const { return nonatomic_; }
    double granularity() const; // eta; only meaningful for surrogates

    bool uniform_weights() const;

    double measure(const MeasurableSet& set) const;

private:
    std::vector<double> weights_;
    std::vector<std::size_t> chunks_;
    bool nonatomic_ = false;
    bool mass_declared_infinite_ = false;
    double total_mass_ = 0.0;
};

/// Frechet-Nikodym distance mu(A delta B). Exact on shared atoms.
double symdiff_distance(const MeasureSpace& space, const MeasurableSet& a,
                        const MeasurableSet& b);

/// Pseudo-random equal-cardinality (hence equal-measure) image of A on a
/// uniform grid. Deterministic under the seed.
MeasurableSet equal_measure_transport(const MeasurableSet& a, const MeasureSpace& space,
                                      std::uint64_t seed);

struct SubsetSearchResult {
    MeasurableSet set;
    double achieved_norm = 0.0;
    double slack = 0.0; // certified epsilon_grid: achieved >= delta * (1 - slack)
};

/// Greedy accumulation (atom-index order) of a set A disjoint from
/// `forbidden` with norm(f * chi_A) in [delta*(1-slack), delta]. The upper
/// bound is hard; the lower one is certified by the returned slack, which is
/// derived from the largest single-atom contribution. Throws
/// TargetUnreachable / GridTooCoarse as documented.
SubsetSearchResult find_subset_with_target_norm(const MeasureSpace& space,
                                                const LatticeFunction& f, double delta,
                                                const NormSpec& spec,
                                                const MeasurableSet& forbidden);

} // namespace vallab
