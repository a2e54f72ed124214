// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opext/operator.hpp"

namespace opext::shifts {

struct RidgeResult {
    CertifiedValue r_minus;  // exact tail limit of the left window products
    CertifiedValue i_plus;   // exact tail limit of the right window products
    long window_n = 0;       // finite-n convergence report
    double window_r_minus = 0.0;
    double window_i_plus = 0.0;
};

/// Asymptotic window-product rates of a constant-tail weight sequence:
/// closed-form limits (the finite core washes out) plus a finite-n report.
RidgeResult ridge_radii(const WeightSeq& w, long window_n = 10000);

/// Approximate point spectrum (two circles for constant tails) and spectrum
/// (the smallest annulus containing them) of a bilateral weighted shift.
std::pair<SpectrumDesc, SpectrumDesc> annulus_spectrum(const WeightSeq& w, const IndexSet& is);

/// Doubly geometric scalar sequence: explicit rationals on [lo, hi), the
/// left tail decays by left_ratio per step leftwards, the right tail by
/// right_ratio per step rightwards.
struct GeomSeq {
    long lo = 0, hi = 0;
    std::vector<Rat> core;
    Rat left_ratio{1}, right_ratio{1};

    Rat at(long n) const;
};

/// Hyperbolic splitting of a quasi-hyperbolic weighted shift: an embedding
/// pi x = (a.x, b.x) with pi o T_w = (T_alpha (+) T_beta) o pi, sup alpha < 1
/// and the beta-shift invertible with inner radius > 1.
struct SplitResult {
    WeightSeq w;
    Rat sigma, tau;
    GeomSeq a, b;
    WeightSeq alpha, beta;
    double kappa1 = 1.0, kappa2 = 2.0;

    Operator split_operator() const;  // S = T_alpha (+) T_beta on l1(Z) (+) l1(Z)
};

SplitResult split_hyperbolic(const WeightSeq& w, std::optional<Rat> sigma = std::nullopt,
                             std::optional<Rat> tau = std::nullopt);

/// Exact rational intertwining check on basis vectors |n| <= nmax:
/// alpha_n a_n = w_n a_{n+1} and beta_n b_n = w_n b_{n+1}.  Returns the
/// number of verified identities; throws on any mismatch.
long intertwining_check_exact(const SplitResult& s, long nmax);

/// ||R(lambda, T)|| on l1(Z) for one shift summand with a certified gap at
/// the unit circle, via exact per-column geometric sums.
CertifiedValue circle_resolvent_norm(const WeightSeq& w, cplx lambda);

/// Per-grid-point norms ||R(lambda_j, S)|| for the lambda grid; OpenMP and
/// serial variants produce bitwise-identical output.
std::vector<double> circle_norm_sweep(const Operator& S, const std::vector<cplx>& lambdas, bool parallel);

/// sup over m equispaced lambda in T of ||R(lambda, S)|| with an enclosure
/// covering the grid modulus (resolvent Lipschitz bound between grid points).
CertifiedValue resolvent_sup_on_circle(const Operator& S, int m, double tol, bool parallel = true);

/// Certified quasi-hyperbolicity constant via the splitting:
/// ||(T_w - lambda)x|| >= (kappa1/kappa2) / sup_T ||R(.,S)|| * ||x||.
CertifiedValue qh_constant(const WeightSeq& w, std::optional<Rat> sigma = std::nullopt,
                           std::optional<Rat> tau = std::nullopt, int grid = 512, double tol = 1e-12);

/// Smallest singular value of the size x size central section of
/// (T_w - lambda) on l2, via the tridiagonal Gram matrix.
double section_min_singular(const WeightSeq& w, cplx lambda, int size);

/// Sweep of section_min_singular over a lambda list (OpenMP/serial).
std::vector<double> section_minsv_sweep(const WeightSeq& w, const std::vector<cplx>& lambdas, int size,
                                        bool parallel);

struct SweepRecord {
    double c = 0.0;       // certified quasi-hyperbolicity constant
    double Mtilde = 2.0;  // max(2, ||T_w||)
    double K_emp = 1.0;   // certified sup of ||R(., S)|| on the circle
    std::string family_id;
};

struct KFit {
    bool ok = false;
    double a = 0.0, b = 0.0;   // K ~ a * Mtilde^(b/c)
    double max_ratio = 0.0;    // max over members of max(K/fit, fit/K)
    std::string report;
};

/// Sweep over a weight family: per member the certified constant, Mtilde and
/// empirical resolvent bound; least-squares fit of log K against
/// (1/c) log Mtilde.  Refuses families with fewer than 3 members.
std::pair<std::vector<SweepRecord>, KFit> kconjecture_sweep(
    const std::vector<std::pair<std::string, WeightSeq>>& family, int grid = 512, double tol = 1e-12);

}  // namespace opext::shifts
