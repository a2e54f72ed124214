// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "opext/certified.hpp"
#include "opext/rational.hpp"

namespace opext::semi {

/// Parameters of the discretized comb semigroup.  The three defining
/// inequalities are kept as exact rational invariants:
///   c^k < eps,   M^k (eps - c^k)/2 > M c/(1-c),
///   (eps - c^k)/2 < (M/(1-c)) eps' < eps - c^k.
struct CombParams {
    Rat c, M, eps, eps_prime;
    long k_eps = 0;
    Rat h;  // grid step; level-aligned: h = k_eps

    bool inequalities_hold() const;
};

/// Builds the comb with the smallest k_eps satisfying the inequalities and
/// eps' the midpoint of its admissible interval.  Requires 0 < eps < c < 1 < M.
CombParams comb_build(const Rat& c, const Rat& M, const Rat& eps);

/// A cell of the comb: axis level L >= 1 covers {0} x ((L-1)k, Lk] with
/// weight c^(L-1); tooth cell (j, i) covers ((i-1)k, ik] x {j k} with weight
/// c^j M^((i-1)k) eps' (inner-edge sample, exact rational).
struct CombCell {
    bool axis = true;
    long a = 1;  // axis level, or tooth index j
    long b = 0;  // tooth cell index i (>= 1) when !axis

    bool operator<(const CombCell& o) const {
        if (axis != o.axis) return axis > o.axis;
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
    bool operator==(const CombCell& o) const { return axis == o.axis && a == o.a && b == o.b; }

    static CombCell axis_level(long L) { return {true, L, 0}; }
    static CombCell tooth(long j, long i) { return {false, j, i}; }
};

/// Finitely supported function on the comb with exact rational coefficients;
/// norm^2 = sum |coef|^2 w(cell)^2 h is an exact rational.
struct CombFunction {
    std::map<CombCell, RatC> coef;

    void add(const CombCell& cell, const RatC& z) {
        RatC s = z;
        auto it = coef.find(cell);
        if (it != coef.end()) s = s + it->second;
        if (s.is_zero())
            coef.erase(cell);
        else
            coef[cell] = s;
    }
};

Rat cell_weight2(const CombParams& p, const CombCell& cell);  // w(cell)^2, exact
Rat comb_norm2(const CombParams& p, const CombFunction& f);   // ||f||^2, exact
double comb_norm(const CombParams& p, const CombFunction& f);

/// Exact cell reindexing along the flow for t a nonnegative multiple of h:
/// per step the axis rises one level and drops a copy on the tooth it
/// crosses; tooth cells slide outward.  (Equivalently: read indices
/// translate left, spill onto the y-axis and vanish past the origin.)
CombFunction comb_evolve(const CombParams& p, const CombFunction& f, const Rat& t);

/// Exact 1/inf_{||f||=1} ||T(t) f||: the branch targets of distinct cells are
/// disjoint, so the infimum is attained on a single cell.
CertifiedValue comb_gamma(const CombParams& p, const Rat& t);

struct CombBoundsReport {
    int trials = 0;
    bool pass = false;
    double min_lower_slack = 0.0;  // min over trials of ||Tf||^2 - c^2 ||f||^2 (scaled)
    double min_upper_slack = 0.0;  // min over trials of 2 M^{2t} ||f||^2 - ||Tf||^2 (scaled)
};

/// Seeded random trials of c||f|| <= ||T(t)f|| <= sqrt(2) M^t ||f||, checked
/// exactly in rational arithmetic (any violation is a hard failure).
CombBoundsReport comb_bounds_check(const CombParams& p, const Rat& t, int trials, std::uint64_t seed);

/// Indicator of {0} x (0, k_eps) (axis level 1); norm sqrt(h).
CombFunction comb_canonical_f(const CombParams& p);

}  // namespace opext::semi
