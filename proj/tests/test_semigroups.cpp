// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opext/semigroup.hpp"
#include "oracles.hpp"

using namespace opext;
using namespace opext::semi;

namespace {
Eigen::MatrixXcd mat2(cplx a, cplx b, cplx c, cplx d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}
}  // namespace

TEST_CASE("evolve: matrix exponential basics") {
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(3, 3);
    Eigen::VectorXcd x = Eigen::VectorXcd::Random(3);
    auto sg = SemigroupModel::matrix_exp(Z);
    CHECK((evolve(sg, 7.3, x) - x).norm() <= 1e-14);  // A = 0 fixes everything

    Eigen::MatrixXcd D1(1, 1);
    D1 << cplx(-1.0);
    Eigen::VectorXcd x1(1);
    x1 << cplx(2.0, 1.0);
    auto sg1 = SemigroupModel::matrix_exp(D1);
    CHECK(std::abs(evolve(sg1, 1.0, x1)(0) - std::exp(-1.0) * x1(0)) <= 1e-14);

    CHECK_THROWS(evolve(sg1, -0.5, x1));  // t >= 0

    // scaling-and-squaring backward error: compare against the eigen-decomposition
    // route for a diagonalizable matrix
    std::mt19937_64 rng(3);
    Eigen::MatrixXcd A = oracles::random_complex_matrix(rng, 5);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::VectorXcd ev = es.eigenvalues();
    Eigen::MatrixXcd direct = evolve_matrix(A, 0.7);
    Eigen::MatrixXcd viaeig = V * (0.7 * ev).array().exp().matrix().asDiagonal() *
                              V.partialPivLu().solve(Eigen::MatrixXcd::Identity(5, 5));
    CHECK((direct - viaeig).norm() <= 1e-10 * direct.norm());
}

TEST_CASE("gamma_T for matrix semigroups") {
    Eigen::MatrixXcd D = mat2(-1, 0, 0, -2);
    auto sg = SemigroupModel::matrix_exp(D);
    for (double t : {0.3, 1.0, 2.5})
        CHECK(gamma_T(sg, t).value == doctest::Approx(std::exp(2.0 * t)).epsilon(1e-12));  // worst mode

    // skew-adjoint: unitary group, gamma = 1
    std::mt19937_64 rng(5);
    Eigen::MatrixXcd S0 = oracles::random_complex_matrix(rng, 4);
    Eigen::MatrixXcd Sk = 0.5 * (S0 - S0.adjoint());
    auto sgu = SemigroupModel::matrix_exp(Sk);
    for (double t : {0.5, 2.0}) CHECK(gamma_T(sgu, t).value == doctest::Approx(1.0).epsilon(1e-12));

    // nilpotent [[0,1],[0,0]], t = 1: 1/sigma_min([[1,1],[0,1]]) = sqrt((3+sqrt 5)/2)
    auto sgn = SemigroupModel::matrix_exp(mat2(0, 1, 0, 0));
    double expect = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(gamma_T(sgn, 1.0).value == doctest::Approx(expect).epsilon(1e-12));
    // 2x2 singular-value oracle: sigma_min^2 is the smaller eigenvalue of the Gram matrix
    Eigen::MatrixXcd T1 = mat2(1, 1, 0, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(T1.adjoint() * T1);
    CHECK(gamma_T(sgn, 1.0).value == doctest::Approx(1.0 / std::sqrt(ges.eigenvalues()(0))).epsilon(1e-12));

    // submultiplicativity on a 20x20 grid
    std::vector<SemigroupModel> models{sg, sgu, sgn};
    for (const auto& m : models)
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                double s = 0.11 * i, t = 0.13 * j;
                CHECK(gamma_T(m, s + t).value <=
                      gamma_T(m, s).value * gamma_T(m, t).value * (1.0 + 1e-10));
            }
}

TEST_CASE("dissipativity_check") {
    auto r = dissipativity_check(Eigen::MatrixXcd::Identity(2, 2));
    CHECK(r.flag);  // A + A* = 2I is psd: T(t) = e^t is expansive
    CHECK(r.margin == doctest::Approx(2.0).epsilon(1e-13));

    auto rn = dissipativity_check(mat2(0, 2, 0, 0));
    CHECK_FALSE(rn.flag);
    CHECK(rn.margin == doctest::Approx(-2.0).epsilon(1e-12));  // eig of [[0,2],[2,0]]
    // the witness realizes the negative form value
    Eigen::MatrixXcd H = mat2(0, 2, 0, 0) + mat2(0, 2, 0, 0).adjoint();
    CHECK(std::real(rn.witness.dot(H * rn.witness)) == doctest::Approx(-2.0).epsilon(1e-10));

    std::mt19937_64 rng(7);
    Eigen::MatrixXcd S0 = oracles::random_complex_matrix(rng, 3);
    Eigen::MatrixXcd Sk = 0.5 * (S0 - S0.adjoint());
    auto rs = dissipativity_check(Sk);
    CHECK(rs.flag);  // boundary case: margin 0
    CHECK(std::abs(rs.margin) <= 1e-12);

    // weighted inner product: P must be positive definite
    Eigen::MatrixXcd P = mat2(1, 0, 0, -1);
    CHECK_THROWS(dissipativity_check(Sk, &P));

    // margin-delta consistency with expansivity of exp(tA)
    int strict = 0, fails = 0;
    for (int tr = 0; tr < 60; ++tr) {
        Eigen::MatrixXcd A = oracles::random_complex_matrix(rng, 3);
        auto rep = dissipativity_check(A);
        auto sg = SemigroupModel::matrix_exp(A);
        if (rep.margin >= 1e-6) {
            ++strict;
            for (int k = 1; k <= 20; ++k) CHECK(1.0 / gamma_T(sg, 0.17 * k).value >= 1.0 - 1e-9);
        } else if (rep.margin <= -1e-6) {
            ++fails;
            bool found = false;
            for (int k = 1; k <= 20; ++k) found |= 1.0 / gamma_T(sg, 0.05 * k).value < 1.0;
            CHECK(found);
        }
    }
    CHECK(strict + fails >= 50);  // the two-sided margin test is almost never vacuous
}

TEST_CASE("renorm_dissipative") {
    // scalar: P = 1/(2(a + w))
    Eigen::MatrixXcd A1(1, 1);
    A1 << cplx(1.5);
    auto cert = renorm_dissipative(A1, 0.25);  // a = 1.5, ahat = -1.5, w > ahat
    CHECK(std::abs(cert.P(0, 0) - cplx(1.0 / (2.0 * (1.5 + 0.25)))) <= 1e-12);
    // scalar threshold: w < -a gives a negative candidate and must fail
    Eigen::MatrixXcd A2(1, 1);
    A2 << cplx(-2.0);
    CHECK_THROWS(renorm_dissipative(A2, 1.0));  // ahat = 2, omega = 1 < ahat

    // nilpotent example vs the quadrature oracle
    Eigen::MatrixXcd N = mat2(0, 1, 0, 0);
    auto certn = renorm_dissipative(N, 0.1);
    CHECK(certn.residual <= 1e-9);
    Eigen::MatrixXcd Pq = oracles::lyapunov_integral_oracle(N, 0.1, 400.0, 4000);
    CHECK((certn.P - Pq).norm() <= 1e-6 * std::max(1.0, Pq.norm()));

    // random instances: residual, positivity, monotone renormed backward flow
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 3.0);
    for (int tr = 0; tr < 30; ++tr) {
        Eigen::MatrixXcd A = oracles::random_complex_matrix(rng, 4);
        double omega = growth_estimate(A) + 0.1;
        auto c = renorm_dissipative(A, omega);
        CHECK(c.residual <= 1e-9);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.P);
        CHECK(es.eigenvalues()(0) > 0.0);
        CHECK(c.cond >= 1.0);
        for (int k = 0; k < 5; ++k) {
            double t = ut(rng);
            Eigen::VectorXcd x = Eigen::VectorXcd::Random(4);
            Eigen::MatrixXcd Et = evolve_matrix(-A, t);
            double lhs = std::exp(-2.0 * omega * t) * std::real((Et * x).dot(c.P * (Et * x)));
            double rhs = std::real(x.dot(c.P * x));
            CHECK(lhs <= rhs * (1.0 + 1e-8) + 1e-12);
        }
        // sqrt(cond P) bounds sup_t e^{-wt} ||e^{-tA}||
        double bound = std::sqrt(c.cond);
        for (int k = 1; k <= 10; ++k) {
            double t = 0.4 * k;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(evolve_matrix(-A, t));
            CHECK(std::exp(-omega * t) * svd.singularValues()(0) <= bound * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("imaginary_axis_lower_bound") {
    // normal matrix diag(1, -1): distance of the spectrum to iR is 1
    auto cv = imaginary_axis_lower_bound(mat2(1, 0, 0, -1), -5.0, 5.0, 501);
    CHECK(cv.value == doctest::Approx(1.0).epsilon(1e-9));

    // skew-adjoint hits zero at a grid point on an eigenvalue
    Eigen::MatrixXcd Sk = mat2(cplx(0, 1), 0, 0, cplx(0, -2));
    auto cz = imaginary_axis_lower_bound(Sk, -2.0, 2.0, 401);  // grid contains s = 1
    CHECK(cz.value <= 1e-12);

    // Jordan-type example vs the per-point singular value oracle + correction
    Eigen::MatrixXcd J = mat2(1, 5, 0, 1);
    auto cj = imaginary_axis_lower_bound(J, -8.0, 8.0, 801);
    double oracle = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 801; ++i) {
        double s = -8.0 + 16.0 * i / 800;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J - cplx(0, s) * Eigen::MatrixXcd::Identity(2, 2));
        oracle = std::min(oracle, svd.singularValues()(1));
    }
    CHECK(std::abs(cj.value - oracle) <= 1e-10);

    // grid refinement never drops below the certified lower value
    auto coarse = imaginary_axis_lower_bound(J, -8.0, 8.0, 101);
    auto fine = imaginary_axis_lower_bound(J, -8.0, 8.0, 1601);
    CHECK(fine.value >= coarse.lower() - 1e-12);

    // serial == parallel
    std::vector<double> ss(77);
    for (std::size_t i = 0; i < ss.size(); ++i) ss[i] = -3.0 + 6.0 * static_cast<double>(i) / 76.0;
    CHECK(iaxis_sweep(J, ss, false) == iaxis_sweep(J, ss, true));
}

TEST_CASE("verify_left_inverse") {
    std::mt19937_64 rng(13);
    Eigen::MatrixXcd A = 0.5 * oracles::random_complex_matrix(rng, 3);
    auto T = SemigroupModel::matrix_exp(A);
    auto L = SemigroupModel::matrix_exp(Eigen::MatrixXcd(-A));
    std::vector<Eigen::VectorXcd> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(Eigen::VectorXcd::Random(3));
    CHECK(verify_left_inverse(L, T, {0.1, 0.5, 1.0, 2.0}, xs) <= 1e-12);

    // unitary pair
    Eigen::MatrixXcd Sk = 0.5 * (A - A.adjoint());
    auto Tu = SemigroupModel::matrix_exp(Sk);
    auto Lu = SemigroupModel::matrix_exp(Eigen::MatrixXcd(-Sk));
    CHECK(verify_left_inverse(Lu, Tu, {0.3, 1.7}, xs) <= 1e-12);

    // perturbed generator: residual grows roughly linearly and is detected
    Eigen::MatrixXcd Ap = -A + 1e-3 * Eigen::MatrixXcd::Identity(3, 3);
    auto Lp = SemigroupModel::matrix_exp(Ap);
    double r1 = verify_left_inverse(Lp, T, {1.0}, xs);
    double r2 = verify_left_inverse(Lp, T, {2.0}, xs);
    CHECK(r1 > 1e-5);
    CHECK(r2 > 1.5 * r1);
    // shape mismatch
    auto T2 = SemigroupModel::matrix_exp(Eigen::MatrixXcd::Zero(2, 2));
    CHECK_THROWS(verify_left_inverse(L, T2, {1.0}, xs));
}
