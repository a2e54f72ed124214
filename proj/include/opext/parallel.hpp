// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace opext {

/// Evaluates f(i) for i in [0, n) into a vector.  The parallel path computes
/// every entry independently (identical floating-point work per entry), so
/// parallel and serial results are bitwise equal; reductions happen on the
/// returned vector in index order.
template <class F>
std::vector<double> map_indexed(std::size_t n, bool parallel, F&& f) {
    std::vector<double> out(n);
#if defined(_OPENMP)
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        return out;
    }
#endif
    (void)parallel;
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
}

}  // namespace opext
