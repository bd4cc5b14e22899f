#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vallab/kernel.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"
#include "vallab/valuation.hpp"

namespace vallab::probes {

/// V(x) = sum_n n x_n^n on nonnegative finitely supported sequences
/// (indices 1-based). A continuous valuation on c_0+ that is unbounded on
/// the unit ball: V(e_n) = n. Indices beyond the truncation are errors,
/// never silently dropped.
class SeriesValuation {
public:
    explicit SeriesValuation(long truncation);

    long truncation() const { return truncation_; }
    double value(const LatticeFunction& x) const;
    Valuation as_valuation() const;

private:
    long truncation_;
};

struct BasisSeriesResult {
    double value = 0.0;            // sum_n n |a_n|^n
    double norm_lower_bound = 0.0; // c * sup |a_n|, from unconditionality
};

/// Unconditional-basis generalization V(sum a_n u_n) = sum n |a_n|^n.
BasisSeriesResult basis_series_valuation(const LatticeFunction& a, double c_unconditionality,
                                         long truncation);

/// phi(f) = min_i |f_i|. Orthogonally additive on connected models, never a
/// valuation.
double min_functional(const LatticeFunction& f);

/// The disconnected two-block witness: (chi_block1, chi_block2). The pair
/// has valuation defect exactly 1 and orthogonality defect exactly 1 for
/// min_functional.
std::pair<LatticeFunction, LatticeFunction> two_block_witness(std::size_t block1,
                                                              std::size_t block2);

/// Connected model: path graph of n_grid nodes, piecewise-linear functions.
/// Generated disjoint pairs keep at least one exact-zero node between their
/// supports (the discrete consequence of connectedness), so the
/// orthogonality defect of min_functional must be 0.
DefectReport connected_disjoint_additivity_suite(std::size_t n_grid, long trials,
                                                 std::uint64_t seed);

struct TentModel {
    Kernel kernel;
    MeasureSpace space;
};

/// Blocks A_n of mass 2^-2n carrying the tent phi_n (peak 2^n at lambda=2,
/// support [0,4]), plus a null-kernel remainder atom. The induced valuation
/// is globally bounded by 1 while max_t K(2, t) = 2^n_blocks grows beyond
/// any envelope a 2^p + b.
TentModel tent_kernel_phi_n(int n_blocks);

struct BoundednessCertificate {
    std::vector<MeasurableSet> pieces; // pairwise disjoint, piece norms ~ delta
    MeasurableSet remainder;
    double delta = 0.0;
    double q = 0.0;
    double norm_f = 0.0;
    double max_grid_slack = 0.0;     // worst certified epsilon_grid over extractions
    double slack = 0.0;              // grid-granularity slack in the bound
    double bound = 0.0;              // (norm_f/delta)^q + 2 + slack
    double achieved = 0.0;           // |V(f)|
    double reconstruction_gap = 0.0; // |sum V(f chi_piece) + V(f chi_rest) - V(f)|
    double max_piece_value = 0.0;    // max |V(f chi_piece)|, remainder included
    bool calibration_ok = false;     // max_piece_value <= 1 (empirical delta-calibration)
};

/// Constructive boundedness splitting: extract pieces of norm ~ delta until
/// the remainder is below delta, decompose V(f) across them, and certify
/// |V(f)| <= (||f||/delta)^q + 2 + slack.
BoundednessCertificate boundedness_certificate(const Valuation& v, const LatticeFunction& f,
                                               double delta, double q, const NormSpec& spec,
                                               const MeasureSpace& space);

struct SeriesIdentityProbe {
    double epsilon = 0.0;
    long terms = 0;
    double partial_sum = 0.0;         // independent running-power oracle
    double oracle_closed_form = 0.0;  // eps / (1-eps)^2
    double printed_closed_form = 0.0; // 1 + (2-eps) eps / (1-eps)^2
    bool printed_formula_discrepant = false;
};

/// Checks sum_n n eps^n against both closed forms. The oracle value is the
/// authoritative one; the other is carried so reports can flag the
/// discrepancy instead of guessing an intended meaning.
SeriesIdentityProbe series_identity_probe(double epsilon, long terms);

struct AtomicProportionalityProbe {
    double c = 0.0;
    double gap = 0.0;
};

/// Proportionality fails on atomic spaces: with mu = (1, 2) and nu = (1, 1)
/// every subset has a distinct mu-mass, so the equal-measure hypothesis is
/// vacuous, yet nu is not a constant multiple of mu.
AtomicProportionalityProbe atomic_proportionality_gap();

} // namespace vallab::probes
