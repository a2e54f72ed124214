// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opext/shifts.hpp"
#include "oracles.hpp"

using namespace opext;
using namespace opext::shifts;

namespace {
std::vector<cplx> circle_grid(int m) {
    std::vector<cplx> g(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double th = 2.0 * M_PI * j / m;
        g[static_cast<std::size_t>(j)] = cplx(std::cos(th), std::sin(th));
    }
    return g;
}
}  // namespace

TEST_CASE("ridge radii") {
    // constant weights: both rates equal the constant
    auto rc = ridge_radii(WeightSeq::constant(Rat(3, 2)), 1000);
    CHECK(rc.r_minus.value == 1.5);
    CHECK(rc.i_plus.value == 1.5);
    CHECK(rc.r_minus.radius == 0.0);
    CHECK(std::abs(rc.window_i_plus - 1.5) <= 1e-12);

    // step weights: tails give (1/2, 2); window products at n = 10^4 agree to 1e-3
    auto rs = ridge_radii(WeightSeq::step(Rat(1, 2), Rat(2)), 10000);
    CHECK(rs.r_minus.value == 0.5);
    CHECK(rs.i_plus.value == 2.0);
    CHECK(std::abs(rs.window_r_minus - 0.5) <= 1e-3);
    CHECK(std::abs(rs.window_i_plus - 2.0) <= 1e-3);

    // periodic start emulated by a core (1, 4, 1, 4) then constant 2: i+ = 2
    WeightSeq per(Rat(1, 2), {Rat(1), Rat(4), Rat(1), Rat(4)}, 0, Rat(2));
    auto rp = ridge_radii(per, 10000);
    CHECK(rp.i_plus.value == 2.0);
    CHECK(std::abs(rp.window_i_plus - 2.0) <= 1e-3);
}

TEST_CASE("annulus spectrum") {
    auto [sap, s] = annulus_spectrum(WeightSeq::constant(Rat(2)), IndexSet::integers());
    REQUIRE(sap.kind == SpectrumDesc::Kind::CircleUnion);
    CHECK(sap.radii == std::vector<double>{2.0});
    CHECK(s.inner() == 2.0);
    CHECK(s.outer() == 2.0);

    auto [sap2, s2] = annulus_spectrum(WeightSeq::step(Rat(1, 2), Rat(2)), IndexSet::integers());
    CHECK(sap2.radii == std::vector<double>{0.5, 2.0});
    CHECK(s2.inner() == 0.5);
    CHECK(s2.outer() == 2.0);

    // expanding-then-contracting step gives the same annulus
    auto [sap3, s3] = annulus_spectrum(WeightSeq::step(Rat(2), Rat(1, 2)), IndexSet::integers());
    CHECK(s3.inner() == 0.5);
    CHECK(s3.outer() == 2.0);

    CHECK_THROWS(annulus_spectrum(WeightSeq::constant(Rat(2)), IndexSet::naturals()));

    // finite-section oracle: sigma_min of (T_w - lambda) sections dips toward
    // zero only near the circles {1/2, 2}; elsewhere it stays bounded below
    WeightSeq w = WeightSeq::step(Rat(1, 2), Rat(2));
    for (double r : {0.5, 2.0}) {
        double v600 = section_min_singular(w, cplx(r, 0.0), 600);
        double v1200 = section_min_singular(w, cplx(r, 0.0), 1200);
        CHECK(v600 <= 0.03);
        CHECK(v1200 <= 0.6 * v600);  // keeps decaying toward 0
    }
    for (double r : {0.25, 1.0, 1.4, 3.0}) {
        double v600 = section_min_singular(w, cplx(r, 0.0), 600);
        double v1200 = section_min_singular(w, cplx(r, 0.0), 1200);
        CHECK(v600 >= 0.2);
        CHECK(v1200 >= 0.2);
    }
}

TEST_CASE("split_hyperbolic: step weights and the displayed scalars") {
    WeightSeq w = WeightSeq::step(Rat(1, 2), Rat(2));
    auto s = split_hyperbolic(w, Rat(3, 4), Rat(3, 2));
    // alpha = (..., 1/2, 1/2 | 3/4, 3/4, ...), beta = (..., 3/2, 3/2 | 2, 2, ...)
    CHECK(s.alpha.at(-1) == Rat(1, 2));
    CHECK(s.alpha.at(0) == Rat(3, 4));
    CHECK(s.alpha.at(5) == Rat(3, 4));
    CHECK(s.beta.at(-1) == Rat(3, 2));
    CHECK(s.beta.at(0) == Rat(2));
    // scalars: a_n = (sigma/2)^n for n > 0, b_n = (1/(2 tau))^{|n|} for n < 0
    CHECK(s.a.at(0) == Rat(1));
    CHECK(s.a.at(1) == Rat(3, 8));
    CHECK(s.a.at(2) == Rat(9, 64));
    CHECK(s.a.at(-5) == Rat(1));
    CHECK(s.b.at(0) == Rat(1));
    CHECK(s.b.at(-1) == Rat(1, 3));
    CHECK(s.b.at(-2) == Rat(1, 9));
    // on e0: pi T_w e0 = (3/4 e1, 2 e1) = S pi e0 exactly
    CHECK(s.w.at(0) * s.a.at(1) == s.alpha.at(0) * s.a.at(0));
    CHECK(s.w.at(0) * s.b.at(1) == s.beta.at(0) * s.b.at(0));
    CHECK(s.alpha.at(0) * s.a.at(0) == Rat(3, 4));
    CHECK(s.beta.at(0) * s.b.at(0) == Rat(2));

    CHECK(intertwining_check_exact(s, 100) == 402);

    // kappa window: one of a_n, b_n is 1 and both lie in (0, 1]
    for (long n = -100; n <= 100; ++n) {
        Rat an = s.a.at(n), bn = s.b.at(n);
        CHECK((an == 1 || bn == 1));
        CHECK(an > 0);
        CHECK(bn > 0);
        CHECK(an <= 1);
        CHECK(bn <= 1);
        CHECK(an + bn >= 1);
        CHECK(an + bn <= 2);
    }
}

TEST_CASE("split_hyperbolic: core weights and rejections") {
    // w with core (1) at n = 0, tails (1/2, 2): exact intertwining
    WeightSeq w(Rat(1, 2), {Rat(1)}, 0, Rat(2));
    auto s = split_hyperbolic(w);
    CHECK(intertwining_check_exact(s, 100) == 402);
    CHECK(to_double(s.alpha.sup()) < 1.0);
    CHECK(s.beta.left_tail > 1);

    // constant w = 2 violates r- < 1
    CHECK_THROWS(split_hyperbolic(WeightSeq::constant(Rat(2))));
    // normalization violations
    CHECK_THROWS(split_hyperbolic(WeightSeq(Rat(1, 2), {Rat(1, 2)}, 0, Rat(2))));  // w_0 < 1
    CHECK_THROWS(split_hyperbolic(WeightSeq(Rat(1, 2), {Rat(3)}, -1, Rat(2))));    // w_{-1} >= 1
    // bad sigma / tau
    CHECK_THROWS(split_hyperbolic(WeightSeq::step(Rat(1, 2), Rat(2)), Rat(1, 4), std::nullopt));
    CHECK_THROWS(split_hyperbolic(WeightSeq::step(Rat(1, 2), Rat(2)), std::nullopt, Rat(3)));
}

TEST_CASE("circle resolvent norms: geometric column sums") {
    // alpha = 1/2 everywhere: ||R(lambda, T_alpha)|| = 1/(1 - 1/2) = 2 on the circle
    auto cv = circle_resolvent_norm(WeightSeq::constant(Rat(1, 2)), cplx(1.0));
    CHECK(cv.value == doctest::Approx(2.0).epsilon(1e-13));
    // beta = 2 everywhere: ||R|| = 1/(2 - 1) = 1
    auto cb = circle_resolvent_norm(WeightSeq::constant(Rat(2)), cplx(0.0, 1.0));
    CHECK(cb.value == doctest::Approx(1.0).epsilon(1e-13));
    // 9/10: 1/(1 - 9/10) = 10
    auto c9 = circle_resolvent_norm(WeightSeq::constant(Rat(9, 10)), cplx(-1.0, 0.0));
    CHECK(c9.value == doctest::Approx(10.0).epsilon(1e-12));
    // no gap: tails straddle the circle
    CHECK_THROWS(circle_resolvent_norm(WeightSeq::step(Rat(1, 2), Rat(2)), cplx(1.0)));

    // dense-section oracle: ||R|| on l1 for the contracting shift matches the
    // column sums of a large truncated inverse
    {
        WeightSeq w(Rat(1, 4), {Rat(1, 2), Rat(3, 4)}, -1, Rat(1, 2));
        cplx lam(std::cos(0.7), std::sin(0.7));
        auto cv2 = circle_resolvent_norm(w, lam);
        int size = 200;
        long lo = -size / 2;
        Eigen::MatrixXcd M = lam * Eigen::MatrixXcd::Identity(size, size);
        for (int i = 0; i + 1 < size; ++i) M(i + 1, i) -= w.at_d(lo + i);
        Eigen::MatrixXcd R = M.partialPivLu().solve(Eigen::MatrixXcd::Identity(size, size));
        double sup = 0.0;
        for (int j = size / 4; j < 3 * size / 4; ++j) sup = std::max(sup, R.col(j).cwiseAbs().sum());
        CHECK(std::abs(sup - cv2.value) <= 1e-10);
    }
}

TEST_CASE("resolvent_sup_on_circle and the splitting sup") {
    auto s = split_hyperbolic(WeightSeq::step(Rat(1, 2), Rat(2)), Rat(3, 4), Rat(3, 2));
    auto sup = resolvent_sup_on_circle(s.split_operator(), 64, 1e-12);
    // max(1/(1 - 3/4), 1/(3/2 - 1)) = 4
    CHECK(sup.value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sup.radius < 1.0);  // grid modulus stays small at this sup

    // alpha = 1/2, beta = 2 family: sup = 2 with both summands evaluated
    Operator S = Operator::direct_sum(
        {Operator::weighted_shift(WeightSeq::constant(Rat(1, 2)), IndexSet::integers()),
         Operator::weighted_shift(WeightSeq::constant(Rat(2)), IndexSet::integers())});
    auto s2 = resolvent_sup_on_circle(S, 128, 1e-12);
    CHECK(s2.value == doctest::Approx(2.0).epsilon(1e-12));
    // reference bound of the quasi-hyperbolic estimate: e 2^5 log 2 / (1/2) = 120.6
    double ref = std::exp(1.0) * std::pow(2.0, 5.0) * std::log(2.0) / 0.5;
    CHECK(ref == doctest::Approx(120.59).epsilon(1e-3));
    CHECK(s2.upper() <= ref);

    // monotone under gap shrinkage on the alpha = r family: sup = 1/(1-r)
    double prev = 0.0;
    for (double r : {0.5, 0.7, 0.9}) {
        Operator Sr = Operator::direct_sum(
            {Operator::weighted_shift(WeightSeq::constant(rat_of_double(r)), IndexSet::integers()),
             Operator::weighted_shift(WeightSeq::constant(Rat(2)), IndexSet::integers())});
        auto sv = resolvent_sup_on_circle(Sr, 64, 1e-12);
        CHECK(sv.value == doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-12));
        CHECK(sv.value > prev);
        prev = sv.value;
    }
}

TEST_CASE("qh_constant: certified bound and the finite-section oracle") {
    WeightSeq w = WeightSeq::step(Rat(1, 2), Rat(2));
    auto c = qh_constant(w, Rat(3, 4), Rat(3, 2), 64, 1e-12);
    CHECK(c.value == doctest::Approx(0.125).epsilon(1e-9));  // (1/2) / 4

    // unweighted bilateral shift: T is inside sigma_ap, precondition fails
    CHECK_THROWS(qh_constant(WeightSeq::constant(Rat(1))));

    // certified c is a true lower bound: finite sections of (T_w - lambda)
    // at size 400 over 64 circle points never dip below it
    auto vals = section_minsv_sweep(w, circle_grid(64), 400, true);
    double mn = *std::min_element(vals.begin(), vals.end());
    CHECK(c.value <= mn);
}

TEST_CASE("kconjecture_sweep") {
    std::vector<std::pair<std::string, WeightSeq>> fam1 = {{"only", WeightSeq::step(Rat(1, 2), Rat(2))}};
    auto [r1, f1] = kconjecture_sweep(fam1, 32, 1e-10);
    CHECK_FALSE(f1.ok);  // singleton family: fit refused

    std::vector<std::pair<std::string, WeightSeq>> fam = {
        {"step-1/2", WeightSeq::step(Rat(1, 2), Rat(2))},
        {"step-1/4", WeightSeq::step(Rat(1, 4), Rat(2))},
        {"step-1/8", WeightSeq::step(Rat(1, 8), Rat(2))}};
    auto [recs, fit] = kconjecture_sweep(fam, 64, 1e-10);
    REQUIRE(recs.size() == 3);
    CHECK(fit.ok);
    // monotone K_emp across the family (sigma defaults shrink with the left tail)
    CHECK(recs[0].K_emp > recs[1].K_emp);
    CHECK(recs[1].K_emp > recs[2].K_emp);
    for (const auto& r : recs) {
        CHECK(r.Mtilde == 2.0);
        CHECK(r.c > 0.0);
        CHECK(r.K_emp >= 1.0);
        double pred = fit.a * std::pow(r.Mtilde, fit.b / r.c);
        CHECK(std::max(r.K_emp / pred, pred / r.K_emp) <= 10.0);  // evidence-quality fit
    }
}

TEST_CASE("serial and parallel sweeps are bitwise identical") {
    WeightSeq w = WeightSeq::step(Rat(1, 2), Rat(2));
    auto grid = circle_grid(37);
    auto a = section_minsv_sweep(w, grid, 120, false);
    auto b = section_minsv_sweep(w, grid, 120, true);
    CHECK(a == b);

    auto s = split_hyperbolic(w);
    auto c1 = circle_norm_sweep(s.split_operator(), grid, false);
    auto c2 = circle_norm_sweep(s.split_operator(), grid, true);
    CHECK(c1 == c2);
}
