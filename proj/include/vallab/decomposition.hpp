#pragma once

#include <cstddef>

#include "vallab/kernel.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"
#include "vallab/valuation.hpp"

namespace vallab {

/// Jordan decomposition V = positive - negative on the positive cone.
/// `negative` is defined as positive - source at call time, so the
/// difference identity is structural.
struct JordanPair {
    Valuation positive;
    Valuation negative;
    Valuation source;
};

/// V+(f) = sum_i mu_i * max_{0 <= s <= f_i} K(s, t_i) for f >= 0. On a
/// discrete space the order-interval constraint decouples per atom. Table
/// kernels: exact max over covered grid nodes plus the interpolated
/// endpoint. Closed forms: dense scan (1000 intervals) plus ternary
/// refinement of the best bracket to width 1e-10.
double positive_part_kernel(const Kernel& kernel, const LatticeFunction& f,
                            const MeasureSpace& space);

/// Independent oracle: per atom, max of h_i over a uniform grid of
/// grid_points samples of [0, f_i]; weighted sum. Requires a per-atom
/// decomposable valuation.
double positive_part_bruteforce(const Valuation& v, const LatticeFunction& f,
                                long grid_points);

/// Decomposes a per-atom-decomposable valuation. Opaque evaluators are
/// refused: the supremum over an order interval for a black box is a
/// high-dimensional global optimization with no algorithm to back it.
JordanPair jordan_decompose(const Valuation& v, const MeasureSpace& space);

} // namespace vallab
