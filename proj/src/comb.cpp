// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/comb.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace opext::semi {

bool CombParams::inequalities_hold() const {
    Rat ck = rat_pow(c, k_eps);
    Rat Mk = rat_pow(M, k_eps);
    bool i1 = ck < eps;
    bool i2 = Mk * (eps - ck) / 2 > M * c / (1 - c);
    Rat mid = (M / (1 - c)) * eps_prime;
    bool i3 = (eps - ck) / 2 < mid && mid < eps - ck;
    return i1 && i2 && i3;
}

CombParams comb_build(const Rat& c, const Rat& M, const Rat& eps) {
    if (!(0 < eps && eps < c && c < 1 && 1 < M))
        throw std::invalid_argument("comb_build: need 0 < eps < c < 1 < M");
    CombParams p;
    p.c = c;
    p.M = M;
    p.eps = eps;
    for (long k = 1;; ++k) {
        if (k > 10000) throw std::runtime_error("comb_build: no feasible k_eps found");
        Rat ck = rat_pow(c, k), Mk = rat_pow(M, k);
        if (!(ck < eps)) continue;
        if (!(Mk * (eps - ck) / 2 > M * c / (1 - c))) continue;
        p.k_eps = k;
        Rat lo = (eps - ck) / 2 * (1 - c) / M, hi = (eps - ck) * (1 - c) / M;
        p.eps_prime = (lo + hi) / 2;
        break;
    }
    p.h = Rat(p.k_eps);
    if (!p.inequalities_hold()) throw std::logic_error("comb_build: postcondition replay failed");
    return p;
}

Rat cell_weight2(const CombParams& p, const CombCell& cell) {
    if (cell.axis) {
        if (cell.a < 1) throw std::invalid_argument("cell_weight2: axis level >= 1 required");
        return rat_pow(p.c, 2 * (cell.a - 1));
    }
    if (cell.a < 1 || cell.b < 1) throw std::invalid_argument("cell_weight2: tooth indices >= 1 required");
    return rat_pow(p.c, 2 * cell.a) * rat_pow(p.M, 2 * (cell.b - 1) * p.k_eps) * p.eps_prime * p.eps_prime;
}

Rat comb_norm2(const CombParams& p, const CombFunction& f) {
    Rat s(0);
    for (const auto& [cell, z] : f.coef) s += z.abs2() * cell_weight2(p, cell) * p.h;
    return s;
}

double comb_norm(const CombParams& p, const CombFunction& f) {
    return std::sqrt(to_double(comb_norm2(p, f)));
}

CombFunction comb_evolve(const CombParams& p, const CombFunction& f, const Rat& t) {
    if (t < 0 || t.get_den() != 1 || t.get_num() % p.h.get_num() != 0)
        throw std::invalid_argument("comb_evolve: t must be a nonnegative multiple of the grid h");
    long n = mpz_class(t.get_num() / p.h.get_num()).get_si();
    CombFunction out = f;
    for (long s = 0; s < n; ++s) {
        CombFunction nxt;
        for (const auto& [cell, z] : out.coef) {
            if (cell.axis) {
                nxt.add(CombCell::axis_level(cell.a + 1), z);
                nxt.add(CombCell::tooth(cell.a, 1), z);
            } else {
                nxt.add(CombCell::tooth(cell.a, cell.b + 1), z);
            }
        }
        out = std::move(nxt);
    }
    return out;
}

CertifiedValue comb_gamma(const CombParams& p, const Rat& t) {
    if (t < 0 || t.get_den() != 1 || t.get_num() % p.h.get_num() != 0)
        throw std::invalid_argument("comb_gamma: t must be a nonnegative multiple of the grid h");
    long n = mpz_class(t.get_num() / p.h.get_num()).get_si();
    if (n == 0) return {1.0, 0.0, "gamma_T(0) = 1"};
    // per-cell squared weight ratio along the flow; levels are homogeneous so
    // one axis cell and one tooth cell represent all of them
    // tooth: ratio M^{2 n k}
    Rat tooth_ratio = rat_pow(p.M, 2 * n * p.k_eps);
    // axis level 1: c^{2n} + eps'^2 sum_{i=1}^{n} c^{2i} M^{2(n-i)k}
    Rat axis_ratio = rat_pow(p.c, 2 * n);
    for (long i = 1; i <= n; ++i)
        axis_ratio += p.eps_prime * p.eps_prime * rat_pow(p.c, 2 * i) * rat_pow(p.M, 2 * (n - i) * p.k_eps);
    Rat mn = std::min(tooth_ratio, axis_ratio);
    double g = 1.0 / std::sqrt(to_double(mn));
    return {g, 1e-13 * g, "exact: 1/sqrt of the minimal per-cell weight-ratio along the flow"};
}

CombBoundsReport comb_bounds_check(const CombParams& p, const Rat& t, int trials, std::uint64_t seed) {
    CombBoundsReport rep;
    rep.trials = trials;
    rep.pass = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> lev(1, 6), tooth(1, 4), cellidx(1, 4), num(-6, 6), den(1, 4),
        ncells(1, 6);
    long n = mpz_class(t.get_num() / p.h.get_num()).get_si();
    Rat c2 = p.c * p.c;
    Rat upper2 = 2 * rat_pow(p.M, 2 * n * p.k_eps);
    double min_lo = std::numeric_limits<double>::infinity(), min_hi = min_lo;
    for (int tr = 0; tr < trials; ++tr) {
        CombFunction f;
        long m = ncells(rng);
        for (long i = 0; i < m; ++i) {
            CombCell cell = rng() % 2 ? CombCell::axis_level(lev(rng))
                                      : CombCell::tooth(tooth(rng), cellidx(rng));
            f.add(cell, RatC(Rat(num(rng), den(rng)), Rat(num(rng), den(rng))));
        }
        Rat f2 = comb_norm2(p, f);
        if (f2 == 0) continue;
        Rat Tf2 = comb_norm2(p, comb_evolve(p, f, t));
        bool lo_ok = Tf2 >= c2 * f2;      // exact rational comparison
        bool hi_ok = Tf2 <= upper2 * f2;  // exact rational comparison
        if (!lo_ok || !hi_ok) rep.pass = false;
        min_lo = std::min(min_lo, to_double((Tf2 - c2 * f2) / f2));
        min_hi = std::min(min_hi, to_double((upper2 * f2 - Tf2) / f2));
    }
    rep.min_lower_slack = min_lo;
    rep.min_upper_slack = min_hi;
    return rep;
}

CombFunction comb_canonical_f(const CombParams&) {
    CombFunction f;
    f.add(CombCell::axis_level(1), RatC(Rat(1)));
    return f;
}

}  // namespace opext::semi
