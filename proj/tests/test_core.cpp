// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opext/operator.hpp"
#include "opext/resolvent.hpp"
#include "oracles.hpp"

using namespace opext;

namespace {

SeqVector vec2(cplx a, cplx b, NormP p = NormP::Two) {
    SeqVector v = SeqVector::zero(IndexSet::finite(2), p);
    v.set(0, 0, a);
    v.set(0, 1, b);
    return v;
}

Eigen::MatrixXcd mat2(cplx a, cplx b, cplx c, cplx d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("lp_norm on basis combinations") {
    SeqVector v = SeqVector::zero(IndexSet::naturals(), NormP::One);
    v.set(0, 0, 1.0);
    v.set(0, 1, 1.0);
    CHECK(lp_norm(v) == 2.0);  // e0 + e1, p = 1

    SeqVector z = SeqVector::zero(IndexSet::naturals(), NormP::One);
    CHECK(lp_norm(z) == 0.0);

    SeqVector w = SeqVector::zero(IndexSet::naturals(), NormP::Two);
    w.set(0, 0, 3.0);
    w.set(0, 1, 4.0);
    CHECK(lp_norm(w) == doctest::Approx(5.0).epsilon(1e-15));  // Pythagorean

    w.p = NormP::Sup;
    CHECK(lp_norm(w) == 4.0);
}

TEST_CASE("apply: shifts, dense, composites") {
    Operator ush = Operator::weighted_shift(WeightSeq::constant(Rat(1)), IndexSet::naturals());
    SeqVector e0 = SeqVector::basis(IndexSet::naturals(), 0, NormP::Two);
    SeqVector img = apply(ush, e0);
    CHECK(img.coeff(0, 1) == cplx(1.0));
    CHECK(img.support_size() == 1);

    Operator wsh = Operator::weighted_shift(WeightSeq(Rat(1), {Rat(2)}, 0, Rat(1)), IndexSet::naturals());
    img = apply(wsh, e0);
    CHECK(img.coeff(0, 1) == cplx(2.0));  // w_0 = 2

    Operator nil = Operator::dense_op(mat2(0, 1, 0, 0));
    SeqVector v = vec2(1.0, 0.0);
    CHECK(lp_norm(apply(nil, v)) == 0.0);  // [[0,1],[0,0]] (1,0) = 0

    // index-set mismatch errors
    SeqVector em = SeqVector::basis(IndexSet::integers(), -3, NormP::Two);
    CHECK_THROWS(apply(ush, em));

    // linearity on random pairs (exact for dyadic rational data)
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-8, 8);
    for (int tr = 0; tr < 50; ++tr) {
        SeqVector a = SeqVector::zero(IndexSet::integers(), NormP::One);
        SeqVector b = a;
        for (int k = 0; k < 4; ++k) {
            a.set(0, d(rng), cplx(d(rng), d(rng)) * 0.25);
            b.set(0, d(rng), cplx(d(rng), d(rng)) * 0.5);
        }
        Operator bsh = Operator::weighted_shift(WeightSeq(Rat(1, 2), {Rat(3, 4)}, 0, Rat(2)),
                                                IndexSet::integers());
        SeqVector lhs = apply(bsh, a + b);
        SeqVector rhs = apply(bsh, a) + apply(bsh, b);
        CHECK(max_abs_diff(lhs, rhs) == 0.0);
    }

    // direct sum routes blocks to summands; block2x2 mixes two blocks
    Operator ds = Operator::direct_sum({ush, ush});
    SeqVector bv(NormP::Two);
    bv.set(0, 0, 1.0);
    bv.set(1, 2, 2.0);
    SeqVector dsi = apply(ds, bv);
    CHECK(dsi.coeff(0, 1) == cplx(1.0));
    CHECK(dsi.coeff(1, 3) == cplx(2.0));

    Operator blk = Operator::block2x2(Operator::dense_op(mat2(1, 0, 0, 1)), Operator::dense_op(mat2(0, 1, 1, 0)),
                                      Operator::dense_op(mat2(0, 0, 0, 0)), Operator::dense_op(mat2(2, 0, 0, 2)));
    SeqVector pv(NormP::Two);
    pv.set(0, 0, 1.0);
    pv.set(1, 0, 3.0);
    SeqVector pb = apply(blk, pv);
    CHECK(pb.coeff(0, 0) == cplx(1.0));
    CHECK(pb.coeff(0, 1) == cplx(3.0));
    CHECK(pb.coeff(1, 0) == cplx(6.0));

    // AffineShift is lambda I - base; Scaled is plain scaling
    Operator aff = Operator::affine_shift(ush, cplx(2.0));
    SeqVector ai = apply(aff, e0);
    CHECK(ai.coeff(0, 0) == cplx(2.0));
    CHECK(ai.coeff(0, 1) == cplx(-1.0));
    Operator sc = Operator::scaled(ush, cplx(0.0, 1.0));
    CHECK(apply(sc, e0).coeff(0, 1) == cplx(0.0, 1.0));
}

TEST_CASE("lower_bound_constant and operator_norm") {
    Operator ush = Operator::weighted_shift(WeightSeq::constant(Rat(1)), IndexSet::naturals());
    CHECK(lower_bound_constant(ush).value == 1.0);  // isometry
    CHECK(lower_bound_constant(ush).radius == 0.0);

    Operator d12 = Operator::dense_op(mat2(1, 0, 0, 2));
    CHECK(lower_bound_constant(d12).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(operator_norm(d12).value == doctest::Approx(2.0).epsilon(1e-14));

    Operator step = Operator::weighted_shift(WeightSeq(Rat(1, 2), {Rat(3)}, 0, Rat(2)), IndexSet::integers());
    CHECK(lower_bound_constant(step).value == 0.5);  // inf of the weights
    CHECK(operator_norm(step).value == 3.0);         // sup of the weights

    Operator ds = Operator::direct_sum({d12, Operator::dense_op(mat2(1, 0, 0, 1))});
    CHECK(operator_norm(ds).value == doctest::Approx(2.0).epsilon(1e-14));  // max rule

    CHECK_THROWS(lower_bound_constant(ds));  // unsupported composite

    // lower bound <= norm always
    std::mt19937_64 rng(3);
    for (int tr = 0; tr < 20; ++tr) {
        Eigen::MatrixXcd m = oracles::random_complex_matrix(rng, 4);
        Operator op = Operator::dense_op(m);
        CHECK(lower_bound_constant(op).value <= operator_norm(op).value + 1e-12);
    }
}

TEST_CASE("spectrum_dense vs characteristic-polynomial root oracle") {
    Operator d = Operator::dense_op(mat2(1, 0, 0, 2));
    auto s = spectrum_dense(d);
    REQUIRE(s.points.size() == 2);
    double dev = oracles::match_point_sets(s.points, {cplx(1.0), cplx(2.0)});
    CHECK(dev <= 1e-12);

    Operator nil = Operator::dense_op(mat2(0, 1, 0, 0));
    auto sn = spectrum_dense(nil);
    dev = oracles::match_point_sets(sn.points, {cplx(0.0), cplx(0.0)});
    CHECK(dev <= 1e-10);

    std::mt19937_64 rng(17);
    for (int tr = 0; tr < 10; ++tr) {
        Eigen::MatrixXcd m = oracles::random_complex_matrix(rng, 4);
        auto sp = spectrum_dense(Operator::dense_op(m));
        auto roots = oracles::charpoly_roots(m);
        CHECK(oracles::match_point_sets(sp.points, roots) <= 1e-8);
    }
}

TEST_CASE("polar_decompose") {
    // identity
    Operator id = Operator::dense_op(mat2(1, 0, 0, 1));
    auto [u, p] = polar_decompose(id);
    CHECK((u.dense - id.dense).norm() <= 1e-14);
    CHECK((p.dense - id.dense).norm() <= 1e-14);

    // constant-2 shift: exact (unweighted shift, 2I)
    Operator w2 = Operator::weighted_shift(WeightSeq::constant(Rat(2)), IndexSet::naturals());
    auto [us, ps] = polar_decompose(w2);
    CHECK(us.kind == Operator::Kind::WeightedShift);
    CHECK(us.weights.sup() == Rat(1));
    CHECK(ps.kind == Operator::Kind::Diagonal);
    CHECK(ps.weights.sup() == Rat(2));
    // exact factorization on basis vectors
    for (long n = 0; n < 20; ++n) {
        SeqVector en = SeqVector::basis(IndexSet::naturals(), n, NormP::Two);
        CHECK(max_abs_diff(apply(w2, en), apply(us, apply(ps, en))) == 0.0);
    }

    // rank-deficient dense: U maps e1 -> e0 and vanishes on ker P
    Operator r1 = Operator::dense_op(mat2(0, 2, 0, 0));
    auto [ur, pr] = polar_decompose(r1);
    CHECK(std::abs(ur.dense(0, 1) - cplx(1.0)) <= 1e-12);
    CHECK(ur.dense.col(0).norm() <= 1e-12);
    CHECK(std::abs(pr.dense(1, 1) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(pr.dense(0, 0)) <= 1e-12);
    // against the SVD oracle on random matrices: U P = A, P psd, U partial isometry
    std::mt19937_64 rng(23);
    for (int tr = 0; tr < 20; ++tr) {
        Eigen::MatrixXcd m = oracles::random_complex_matrix(rng, 5);
        auto [uu, pp] = polar_decompose(Operator::dense_op(m));
        CHECK((uu.dense * pp.dense - m).norm() <= 1e-10 * std::max(1.0, m.norm()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pp.dense);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        CHECK(oracles::singular_values_oracle(m, pp.dense) <= 1e-9);
    }
}

TEST_CASE("apply_resolvent") {
    // op = I (diagonal weight 1), lambda = 2: u = v
    Operator idd = Operator::diagonal(WeightSeq::constant(Rat(1)), IndexSet::naturals());
    SeqVector v = SeqVector::basis(IndexSet::naturals(), 3, NormP::Two, cplx(2.0, -1.0));
    auto r = apply_resolvent(idd, cplx(2.0), v, 1e-12);
    CHECK(max_abs_diff(r.u, v) == 0.0);
    CHECK(r.residual.value == 0.0);

    // bilateral unweighted shift, lambda = 2, v = e0: geometric series sum 2^{-(k+1)} e_k
    Operator bsh = Operator::weighted_shift(WeightSeq::constant(Rat(1)), IndexSet::integers());
    SeqVector e0 = SeqVector::basis(IndexSet::integers(), 0, NormP::Two);
    auto rs = apply_resolvent(bsh, cplx(2.0), e0, 1e-12);
    for (long k = 0; k < 10; ++k)
        CHECK(std::abs(rs.u.coeff(0, k) - std::pow(2.0, -(double)(k + 1))) <= 1e-13);
    CHECK(rs.residual.value <= 1e-12);

    // shift with both tails 1/2, lambda = 1: series vs a size-200 dense-truncation solve
    Operator half = Operator::weighted_shift(WeightSeq::constant(Rat(1, 2)), IndexSet::integers());
    auto rh = apply_resolvent(half, cplx(1.0), e0, 1e-12);
    auto oracle = oracles::truncated_shift_resolvent(WeightSeq::constant(Rat(1, 2)), cplx(1.0), 200);
    double dev = 0.0;
    for (const auto& [n, z] : oracle) dev = std::max(dev, std::abs(rh.u.coeff(0, n) - z));
    CHECK(dev <= 1e-8);

    // residual contract: applying (lambda - op) reproduces v within the bound
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> di(-6, 6);
    for (int tr = 0; tr < 100; ++tr) {
        SeqVector x = SeqVector::zero(IndexSet::integers(), NormP::Two);
        for (int k = 0; k < 3; ++k) x.set(0, di(rng), cplx(di(rng), di(rng)) * 0.25);
        cplx lam = (tr % 2) ? cplx(3.0, 0.5) : cplx(0.1, 0.05);  // outer and inner regimes
        Operator op = Operator::weighted_shift(WeightSeq(Rat(1, 2), {Rat(3, 4), Rat(2)}, -1, Rat(2)),
                                               IndexSet::integers());
        auto rr = apply_resolvent(op, lam, x, 1e-10);
        SeqVector back = lam * rr.u - apply(op, rr.u);
        CHECK(lp_norm(back - x) <= rr.residual.upper() + 1e-12);
    }

    // lambda inside the certified enclosure is rejected
    CHECK_THROWS(apply_resolvent(bsh, cplx(1.0), e0, 1e-10));
    // dense: eigenvalue proximity is rejected
    Operator dd = Operator::dense_op(mat2(1, 0, 0, 2));
    CHECK_THROWS(apply_resolvent(dd, cplx(1.0), vec2(1.0, 1.0), 1e-10));
}

TEST_CASE("check_pseudo_resolvent") {
    // degenerate 2x2 family: R(l) = [[0,(k-1)!],[0,0]] constant in l
    for (int k : {2, 3}) {
        double fact = k == 2 ? 1.0 : 2.0;
        PseudoResolventFamily fam;
        for (double l : {1.0, 2.0, 3.0}) {
            fam.lambdas.push_back(cplx(l));
            fam.ops.push_back(mat2(0, fact, 0, 0));
        }
        auto rep = check_pseudo_resolvent(fam, {{0, 1}, {0, 2}, {1, 2}});
        CHECK(rep.max_residual == 0.0);  // R(l)R(m) = 0, so the identity is exact
        CHECK_FALSE(rep.kernel_trivial);
    }

    // true resolvent family of a dense operator
    Eigen::MatrixXcd A = mat2(cplx(0.3, 0.1), 1, 0, cplx(-0.2, 0.4));
    PseudoResolventFamily fam;
    for (double l : {2.0, 3.0, -2.5}) {
        fam.lambdas.push_back(cplx(l));
        Eigen::MatrixXcd M = cplx(l) * Eigen::MatrixXcd::Identity(2, 2) - A;
        fam.ops.push_back(M.partialPivLu().solve(Eigen::MatrixXcd::Identity(2, 2)));
    }
    auto rep = check_pseudo_resolvent(fam, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(rep.max_residual <= 1e-12);
    CHECK(rep.kernel_trivial);

    // constant identity family violates the identity by exactly |m - l|
    PseudoResolventFamily idf;
    idf.lambdas = {cplx(1.0), cplx(2.5)};
    idf.ops = {Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)};
    auto repi = check_pseudo_resolvent(idf, {{0, 1}});
    CHECK(repi.max_residual == doctest::Approx(1.5).epsilon(1e-12));

    PseudoResolventFamily bad;
    bad.lambdas = {cplx(1.0)};
    bad.ops = {Eigen::MatrixXcd::Identity(3, 3)};
    bad.lambdas.push_back(cplx(2.0));
    bad.ops.push_back(Eigen::MatrixXcd::Identity(2, 2));
    CHECK_THROWS(check_pseudo_resolvent(bad, {{0, 1}}));  // shape mismatch
}

TEST_CASE("shift spectral enclosure gates the resolvent") {
    WeightSeq w(Rat(1, 2), {}, 0, Rat(2));
    auto enc = shift_spectral_enclosure(w, IndexSet::integers());
    CHECK(enc.inner() == 0.5);
    CHECK(enc.outer() == 2.0);
    auto encu = shift_spectral_enclosure(w, IndexSet::naturals());
    CHECK(encu.inner() == 0.0);  // unilateral: disk
}
