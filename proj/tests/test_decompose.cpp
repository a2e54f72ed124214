// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opext/decompose.hpp"
#include "oracles.hpp"

using namespace opext;
using namespace opext::semi;

namespace {

// brute-force oracle: the second-order-cone formulation solved by projected
// subgradient from many starts, keeping the best dual-feasible certificate
struct OracleResult {
    double cost = 0.0;
    double dual = 0.0;
};

OracleResult projected_subgradient_oracle(const std::vector<Eigen::MatrixXcd>& B,
                                          const std::vector<double>& g, const Eigen::VectorXcd& b,
                                          int starts, std::uint64_t seed) {
    long m = B[0].rows(), total = 0;
    std::vector<long> off;
    for (const auto& Bi : B) {
        off.push_back(total);
        total += Bi.cols();
    }
    Eigen::MatrixXcd C(m, total);
    for (std::size_t i = 0; i < B.size(); ++i) C.middleCols(off[i], B[i].cols()) = B[i];
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> pinv(C);
    auto project = [&](const Eigen::VectorXcd& z) -> Eigen::VectorXcd {
        return z - pinv.solve(C * z - b);
    };
    auto cost_of = [&](const Eigen::VectorXcd& z) {
        double c = 0.0;
        for (std::size_t i = 0; i < B.size(); ++i) c += g[i] * z.segment(off[i], B[i].cols()).norm();
        return c;
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd bestz;
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXcd z(total);
        for (long i = 0; i < total; ++i) z(i) = cplx(gauss(rng), gauss(rng));
        z = project(z);
        double step0 = std::max(1.0, z.norm());
        for (int it = 1; it <= 4000; ++it) {
            Eigen::VectorXcd sub(total);
            for (std::size_t i = 0; i < B.size(); ++i) {
                auto zi = z.segment(off[i], B[i].cols());
                double nz = zi.norm();
                sub.segment(off[i], B[i].cols()) = nz > 1e-14 ? Eigen::VectorXcd((g[i] / nz) * zi)
                                                              : Eigen::VectorXcd::Zero(B[i].cols());
            }
            sub = Eigen::VectorXcd(sub - pinv.solve(C * sub));  // project onto the constraint plane
            double sn = sub.norm();
            if (sn < 1e-15) break;
            z = project(z - (step0 / (sn * std::sqrt(static_cast<double>(it)))) * sub);
            double c = cost_of(z);
            if (c < best) {
                best = c;
                bestz = z;
            }
        }
    }
    // dual certificate from the best point, scaled into feasibility
    Eigen::VectorXcd grad(total);
    for (std::size_t i = 0; i < B.size(); ++i) {
        auto zi = bestz.segment(off[i], B[i].cols());
        double nz = zi.norm();
        grad.segment(off[i], B[i].cols()) =
            nz > 1e-14 ? Eigen::VectorXcd((g[i] / nz) * zi) : Eigen::VectorXcd::Zero(B[i].cols());
    }
    Eigen::MatrixXcd G = C * C.adjoint();
    Eigen::VectorXcd y = G.fullPivLu().solve(C * grad);
    double sc = 0.0;
    for (std::size_t i = 0; i < B.size(); ++i) sc = std::max(sc, (B[i].adjoint() * y).norm() / g[i]);
    if (sc > 1.0) y /= sc;
    return {best, std::real(y.dot(b))};
}

}  // namespace

TEST_CASE("decomposition cost: forced witness at t_n = t") {
    Eigen::MatrixXcd A(2, 2);
    A << cplx(0, 1), cplx(0.3), cplx(0), cplx(-0.5);
    auto sg = SemigroupModel::matrix_exp(A);
    Eigen::VectorXcd x(2);
    x << cplx(1, 1), cplx(-2, 0.5);
    auto sol = decomposition_cost(sg, {1.0}, 1.0, x, [](double s) { return 2.0 + s; }, false);
    CHECK(sol.cost == doctest::Approx(2.0 * x.norm()).epsilon(1e-12));  // gamma(0) ||x||
    CHECK((sol.witnesses[0] - x).norm() <= 1e-12);
    CHECK(sol.gap <= 1e-9);
}

TEST_CASE("decomposition cost: scalar contraction example") {
    Eigen::MatrixXcd A(1, 1);
    A << cplx(-1.0);
    auto sg = SemigroupModel::matrix_exp(A);
    Eigen::VectorXcd x(1);
    x << cplx(3.0);
    // T(1) x = T(0) x_1 forces x_1 = e^{-1} x; with gamma = 1 the cost is e^{-1} |x|
    auto sol = decomposition_cost(sg, {0.0}, 1.0, x, [](double) { return 1.0; }, false);
    CHECK(sol.cost == doctest::Approx(std::exp(-1.0) * 3.0).epsilon(1e-9));
    // condition (a) with gamma = 1 fails here (cost < ||x||): gamma(1) >= e would be needed
    CHECK_FALSE(sol.condition_a);
    auto sole = decomposition_cost(sg, {0.0}, 1.0, x, [](double s) { return std::exp(s); }, false);
    CHECK(sole.cost == doctest::Approx(3.0).epsilon(1e-9));  // e * e^{-1} |x|
    CHECK(sole.condition_a);
}

TEST_CASE("decomposition cost vs projected-subgradient oracle") {
    std::mt19937_64 rng(101);
    int checked = 0;
    for (int inst = 0; inst < 12; ++inst) {
        long dim = 1 + (inst % 2);
        Eigen::MatrixXcd A = 0.6 * oracles::random_complex_matrix(rng, dim);
        auto sg = SemigroupModel::matrix_exp(A);
        std::uniform_real_distribution<double> ut(0.1, 0.9);
        double t = 1.0;
        std::vector<double> times{0.0, ut(rng), 1.0};
        std::sort(times.begin(), times.end());
        if (inst % 3 == 0) times.pop_back();  // exercise the projection path too
        Eigen::VectorXcd x = Eigen::VectorXcd::Random(dim);
        auto gamma = [](double s) { return 1.0 + 0.5 * s; };
        auto sol = decomposition_cost(sg, times, t, x, gamma, false);
        CHECK(sol.gap <= 1e-6 * (1.0 + sol.cost));
        CHECK(sol.dual_bound <= sol.cost + 1e-12);
        // oracle
        std::vector<Eigen::MatrixXcd> B;
        std::vector<double> g;
        for (double ti : times) {
            B.push_back(evolve_matrix(A, ti));
            g.push_back(gamma(t - ti));
        }
        Eigen::VectorXcd b = evolve_matrix(A, t) * x;
        auto orc = projected_subgradient_oracle(B, g, b, 100, 7 + inst);
        CHECK(std::abs(sol.cost - orc.cost) <= 1e-4 * (1.0 + std::abs(orc.cost)));
        CHECK(orc.dual <= sol.cost + 1e-6);
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("decomposition cost: discrete mode (powers of the time-one map)") {
    std::mt19937_64 rng(55);
    Eigen::MatrixXcd A = 0.4 * oracles::random_complex_matrix(rng, 2);
    auto sg = SemigroupModel::matrix_exp(A);
    Eigen::VectorXcd x = Eigen::VectorXcd::Random(2);
    auto sol = decomposition_cost(sg, {0.0, 1.0, 2.0}, 3.0, x, [](double) { return 1.0; }, true);
    CHECK(sol.gap <= 1e-6 * (1.0 + sol.cost));
    CHECK_THROWS(decomposition_cost(sg, {0.5}, 1.0, x, [](double) { return 1.0; }, true));  // non-integer
    // unsorted times rejected
    CHECK_THROWS(decomposition_cost(sg, {1.0, 0.5}, 2.0, x, [](double) { return 1.0; }, false));
}

TEST_CASE("min_sum_norms: duality and infeasibility") {
    // duality: dual bound never exceeds the cost and the gap certifies optimality
    std::mt19937_64 rng(77);
    for (int inst = 0; inst < 10; ++inst) {
        std::vector<Eigen::MatrixXcd> B{oracles::random_complex_matrix(rng, 2),
                                        oracles::random_complex_matrix(rng, 2)};
        Eigen::VectorXcd b = Eigen::VectorXcd::Random(2);
        auto sol = min_sum_norms(B, {1.0, 1.5}, b);
        CHECK(sol.converged);
        CHECK(sol.dual_bound <= sol.cost + 1e-12);
        CHECK(sol.feas_residual <= 1e-9 * std::max(1.0, b.norm()));
    }
    // infeasible: rank-deficient blocks cannot reach b
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2, 2);
    Eigen::VectorXcd b1(2);
    b1 << cplx(1.0), cplx(0.0);
    CHECK_THROWS(min_sum_norms({Z}, {1.0}, b1));
}
