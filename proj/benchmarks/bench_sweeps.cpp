// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Timing comparison of the serial reference kernels against the OpenMP ones.

#include <chrono>
#include <cstdio>

#include "opext/semigroup.hpp"
#include "opext/shifts.hpp"

using namespace opext;

namespace {

template <class F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<cplx> circle_grid(int m) {
    std::vector<cplx> g(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double th = 2.0 * M_PI * j / m;
        g[static_cast<std::size_t>(j)] = cplx(std::cos(th), std::sin(th));
    }
    return g;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.2f ms %10.2f ms   x%.2f\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    std::printf("%-28s %13s %13s   speedup\n", "kernel", "serial", "openmp");

    {
        WeightSeq w = WeightSeq::step(Rat(1, 2), Rat(2));
        auto grid = circle_grid(64);
        double ts = time_ms([&] { shifts::section_minsv_sweep(w, grid, 400, false); });
        double tp = time_ms([&] { shifts::section_minsv_sweep(w, grid, 400, true); });
        row("section sigma_min (400x400)", ts, tp);
    }
    {
        auto s = shifts::split_hyperbolic(WeightSeq::step(Rat(1, 2), Rat(2)));
        Operator S = s.split_operator();
        auto grid = circle_grid(200000);
        double ts = time_ms([&] { shifts::circle_norm_sweep(S, grid, false); });
        double tp = time_ms([&] { shifts::circle_norm_sweep(S, grid, true); });
        row("circle resolvent norms", ts, tp);
    }
    {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(16, 16);
        std::vector<double> svals(20000);
        for (std::size_t i = 0; i < svals.size(); ++i) svals[i] = -10.0 + 20.0 * i / (svals.size() - 1);
        double ts = time_ms([&] { semi::iaxis_sweep(A, svals, false); });
        double tp = time_ms([&] { semi::iaxis_sweep(A, svals, true); });
        row("imaginary-axis sigma_min", ts, tp);
    }
    return 0;
}
