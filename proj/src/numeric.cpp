#include "vallab/numeric.hpp"

#include <cmath>

#include "vallab/errors.hpp"

namespace vallab {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw InvalidInput("linspace: need at least 2 nodes");
    if (!(lo < hi)) throw InvalidInput("linspace: lo must be < hi");
    std::vector<double> nodes(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) nodes[i] = lo + static_cast<double>(i) * step;
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

std::vector<double> lambda_linspace(double lo, double hi, std::size_t count) {
    std::vector<double> nodes = linspace(lo, hi, count);
    if (lo < 0.0 && hi > 0.0) {
        std::size_t closest = 0;
        for (std::size_t i = 1; i < count; ++i)
            if (std::abs(nodes[i]) < std::abs(nodes[closest])) closest = i;
        nodes[closest] = 0.0;
    }
    return nodes;
}

} // namespace vallab
