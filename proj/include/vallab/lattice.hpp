#pragma once

#include <cstddef>
#include <vector>

#include "vallab/measure_space.hpp"

namespace vallab {

/// Real vector aligned with the atoms of a measure space; the discrete
/// stand-in for a lattice element f. Plain value type, all entries finite.
struct LatticeFunction {
    std::vector<double> values;

    LatticeFunction() = default;
    explicit LatticeFunction(std::vector<double> v);

    static LatticeFunction zeros(std::size_t n);
    static LatticeFunction constant(std::size_t n, double c);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    bool operator==(const LatticeFunction& other) const { return values == other.values; }
};

LatticeFunction operator+(const LatticeFunction& a, const LatticeFunction& b);
LatticeFunction operator-(const LatticeFunction& a, const LatticeFunction& b);
LatticeFunction operator*(double c, const LatticeFunction& f);

// chi_A, and lambda * chi_A.
LatticeFunction indicator(std::size_t atom_count, const MeasurableSet& a);
LatticeFunction scaled_indicator(std::size_t atom_count, double lambda, const MeasurableSet& a);

// f * chi_A and f * chi_{Omega_k} (k-th chunk prefix).
LatticeFunction restrict_to(const LatticeFunction& f, const MeasurableSet& a);
LatticeFunction restrict_to_chunk(const MeasureSpace& space, const LatticeFunction& f,
                                  std::size_t chunk_index);

LatticeFunction join(const LatticeFunction& f, const LatticeFunction& g); // pointwise max
LatticeFunction meet(const LatticeFunction& f, const LatticeFunction& g); // pointwise min

struct AbsParts {
    LatticeFunction abs; // |f| = f_+ + f_-
    LatticeFunction pos; // f_+ = f v 0
    LatticeFunction neg; // f_- = (-f) v 0
};
AbsParts abs_parts(const LatticeFunction& f);

/// True iff min(|f_i|, |g_i|) == 0 for every i. Exact comparison against
/// 0.0: orthogonal additivity is an exact algebraic hypothesis, so
/// generators must produce exact zeros.
bool is_disjoint(const LatticeFunction& f, const LatticeFunction& g);

/// Band projection P_x(y): on atoms, y masked by the support of x (x >= 0).
LatticeFunction band_projection(const LatticeFunction& x, const LatticeFunction& y);

/// Orlicz Young function; named builtins only, so specs serialize.
struct OrliczPhi {
    enum class Kind { power, exp_minus_one };
    Kind kind = Kind::power;
    double p = 2.0; // exponent for Kind::power

    double operator()(double u) const;

    static OrliczPhi power(double p);
    static OrliczPhi exp_minus_one();
};

class NormSpec {
public:
    enum class Variant { lp, sup, orlicz };

    static NormSpec lp(double p);
    static NormSpec sup();
    static NormSpec orlicz(OrliczPhi phi);

    Variant variant() const { return variant_; }
    double p() const { return p_; }
    const OrliczPhi& phi() const { return phi_; }

private:
    NormSpec() = default;
    Variant variant_ = Variant::lp;
    double p_ = 2.0;
    OrliczPhi phi_{};
};

/// Lp: (sum |f_i|^p mu_i)^(1/p); sup: max |f_i|; Orlicz: Luxemburg gauge
/// inf{ s > 0 : sum phi(|f_i|/s) mu_i <= 1 } by monotone bisection to
/// relative tolerance 1e-12.
double norm(const MeasureSpace& space, const LatticeFunction& f, const NormSpec& spec);

/// (sum ||x_i||^q)^(1/q) / ||sum x_i|| for a pairwise disjoint family.
double lower_q_estimate_ratio(const MeasureSpace& space,
                              const std::vector<LatticeFunction>& family, double q,
                              const NormSpec& spec);

struct QEstimateReport {
    double q = 0.0;
    double best_ratio = 0.0;
    std::vector<LatticeFunction> witness_family;
};

QEstimateReport aggregate_q_estimate(const MeasureSpace& space,
                                     const std::vector<std::vector<LatticeFunction>>& families,
                                     double q, const NormSpec& spec);

} // namespace vallab
