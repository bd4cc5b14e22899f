#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace vallab {

// Neumaier-compensated accumulator. Deterministic for a fixed visit order;
// keeps grouped/partitioned sums consistent to a few ulp, which several
// reconstruction identities rely on.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// count >= 2 nodes from lo to hi inclusive, endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t count);

// linspace that additionally snaps the node closest to 0 to exactly 0
// when the range brackets it (lambda grids must contain 0).
std::vector<double> lambda_linspace(double lo, double hi, std::size_t count);

} // namespace vallab
