#pragma once

// Independent oracle for the local gradient-descent steps: treats the local
// implicit residual as an opaque affine function R(d) of the increment
// vector, extracts its gradient by probing unit directions, and minimizes
// R(d)^2 exactly along that gradient line. No coefficient algebra from the
// implementation is reused.

#include <cstddef>
#include <functional>
#include <vector>

namespace condopt::testing {

using AffineResidual = std::function<long double(const std::vector<long double>&)>;

inline std::vector<long double> line_search_minimum(const AffineResidual& residual,
                                                    std::size_t dimension)
{
    std::vector<long double> zero(dimension, 0.0L);
    const long double r0 = residual(zero);

    std::vector<long double> gradient(dimension);
    long double gg = 0.0L;
    for (std::size_t m = 0; m < dimension; ++m) {
        std::vector<long double> probe(dimension, 0.0L);
        probe[m] = 1.0L;
        gradient[m] = residual(probe) - r0; // exact for affine R
        gg += gradient[m] * gradient[m];
    }

    // min over eta of (r0 + eta * g.g)^2  =>  eta = -r0 / g.g
    const long double eta = -r0 / gg;
    std::vector<long double> best(dimension);
    for (std::size_t m = 0; m < dimension; ++m) {
        best[m] = eta * gradient[m];
    }
    return best;
}

} // namespace condopt::testing
