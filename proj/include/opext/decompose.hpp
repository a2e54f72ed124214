// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>

#include "opext/semigroup.hpp"

namespace opext::semi {

struct SolverOpts {
    double gap_tol = 1e-6;     // relative gap target: gap <= gap_tol * (1 + cost)
    long max_iters = 1000000;  // iteration budget counted in matrix applications
    std::uint64_t seed = 1;
};

/// min sum_i gammas[i] ||z_i||  s.t.  sum_i B[i] z_i = b   (complex data).
/// Smoothed first-order minimization with feasibility by exact projection;
/// the dual bound comes from a scaled dual-feasible point, so
/// dual_bound <= optimum <= cost always holds on return.
struct SumNormSolution {
    std::vector<Eigen::VectorXcd> z;
    double cost = 0.0;
    double dual_bound = 0.0;
    double gap = 0.0;
    double feas_residual = 0.0;
    long iterations = 0;
    bool converged = false;
};

SumNormSolution min_sum_norms(const std::vector<Eigen::MatrixXcd>& B, const std::vector<double>& gammas,
                              const Eigen::VectorXcd& b, const SolverOpts& opts = {});

using GammaFn = std::function<double(double)>;

struct DecompositionSolution {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> witnesses;
    double cost = 0.0;
    double dual_bound = 0.0;
    double gap = 0.0;
    double feas_residual = 0.0;
    bool converged = false;
    bool condition_a = false;  // cost >= ||x|| for the sampled instance
};

/// Decomposition cost of T(t)x over the prescribed times: the minimum of
/// sum_i gamma(t - t_i) ||x_i|| subject to sum_i T(t_i) x_i = T(t) x.
/// With the discrete flag, T(t_i) is replaced by integer powers of the
/// time-one map.  When t_n = t, x_n is eliminated exactly; otherwise
/// feasibility is kept by projection.
DecompositionSolution decomposition_cost(const SemigroupModel& sg, std::vector<double> times, double t,
                                         const Eigen::VectorXcd& x, const GammaFn& gamma, bool discrete,
                                         const SolverOpts& opts = {});

struct CombWitness {
    Rat time{0};
    std::vector<std::pair<CombCell, cplx>> coef;
};

struct CombBlowupResult {
    double cost = 0.0;
    double dual_bound = 0.0;
    double gap = 0.0;
    double feas_residual = 0.0;
    double eps = 0.0;  // the target bound
    bool converged = false;
    bool pass = false;  // cost <= eps + 1e-3
    std::vector<CombWitness> witnesses;
};

/// Left-inverse blow-up certificate: decomposes T(k^2) f over the times
/// {0} U {k (k - i)} and certifies cost <= eps + 1e-3 (the construction
/// guarantees such a decomposition exists).  f must be supported on
/// {0} x (0, k_eps); it is normalized to unit norm (the program is
/// positively homogeneous).
CombBlowupResult comb_blowup_certificate(const CombParams& p, const CombFunction& f,
                                         const SolverOpts& opts = {});

}  // namespace opext::semi
