// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/semigroup.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "opext/parallel.hpp"

namespace opext::semi {

SemigroupModel SemigroupModel::matrix_exp(Eigen::MatrixXcd a) {
    if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > 32)
        throw std::invalid_argument("SemigroupModel: MatrixExp dimension must be in [1, 32]");
    SemigroupModel m;
    m.kind = Kind::MatrixExp;
    m.A = std::move(a);
    return m;
}

SemigroupModel SemigroupModel::comb_model(CombParams p) {
    SemigroupModel m;
    m.kind = Kind::Comb;
    m.comb = std::move(p);
    return m;
}

Eigen::MatrixXcd evolve_matrix(const Eigen::MatrixXcd& A, double t) {
    if (t < 0) throw std::invalid_argument("evolve: t >= 0 required");
    Eigen::MatrixXcd tA = t * A;
    return tA.exp();
}

Eigen::VectorXcd evolve(const SemigroupModel& sg, double t, const Eigen::VectorXcd& x) {
    if (sg.kind != SemigroupModel::Kind::MatrixExp)
        throw std::invalid_argument("evolve: vector overload is for MatrixExp models (use comb_evolve)");
    return evolve_matrix(sg.A, t) * x;
}

CertifiedValue gamma_T(const SemigroupModel& sg, double t) {
    if (sg.kind == SemigroupModel::Kind::Comb) {
        Rat tr = rat_of_double(t);
        return comb_gamma(sg.comb, tr);
    }
    Eigen::MatrixXcd T = evolve_matrix(sg.A, t);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 0) throw std::runtime_error("gamma_T: exp(tA) numerically singular");
    double g = 1.0 / smin;
    return {g, 1e-11 * g * std::max(1.0, T.norm()), "1/sigma_min(exp(tA))"};
}

DissipReport dissipativity_check(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd* P) {
    long n = A.rows();
    Eigen::MatrixXcd Pm = P ? *P : Eigen::MatrixXcd::Identity(n, n);
    if (P) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pes(Pm);
        if ((Pm - Pm.adjoint()).norm() > 1e-10 * std::max(1.0, Pm.norm()) ||
            pes.eigenvalues().minCoeff() <= 0)
            throw std::invalid_argument("dissipativity_check: P must be Hermitian positive definite");
    }
    Eigen::MatrixXcd H = Pm * A + A.adjoint() * Pm;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    DissipReport r;
    r.margin = es.eigenvalues()(0);
    r.flag = r.margin >= 0.0;
    if (r.margin < 0) r.witness = es.eigenvectors().col(0);
    return r;
}

double growth_estimate(const Eigen::MatrixXcd& A) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    double a = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < es.eigenvalues().size(); ++i) a = std::max(a, -es.eigenvalues()(i).real());
    return a;
}

RenormCertificate renorm_dissipative(const Eigen::MatrixXcd& A, double omega) {
    long n = A.rows();
    double ahat = growth_estimate(A);
    if (!(omega > ahat + 1e-9))
        throw std::domain_error("renorm_dissipative: omega must exceed the growth estimate of e^{-tA}");
    Eigen::MatrixXcd M = A + omega * Eigen::MatrixXcd::Identity(n, n);
    // vec(M* P + P M) = (I (x) M* + M^T (x) I) vec(P)
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n * n, n * n);
    Eigen::MatrixXcd Ms = M.adjoint(), Mt = M.transpose();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            for (long k = 0; k < n; ++k) {
                K(i + n * j, k + n * j) += Ms(i, k);  // (I (x) M*)
                K(i + n * j, i + n * k) += Mt(j, k);  // (M^T (x) I)
            }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    for (long i = 0; i < n; ++i) rhs(i + n * i) = 1.0;
    Eigen::VectorXcd pvec = K.partialPivLu().solve(rhs);
    Eigen::MatrixXcd Pm(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) Pm(i, j) = pvec(i + n * j);
    Pm = 0.5 * (Pm + Pm.adjoint());  // symmetrize the solve noise

    RenormCertificate cert;
    cert.P = Pm;
    cert.omega = omega;
    cert.residual = (M.adjoint() * Pm + Pm * M - Eigen::MatrixXcd::Identity(n, n)).norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Pm);
    double mn = es.eigenvalues()(0), mx = es.eigenvalues()(n - 1);
    if (mn <= 0)
        throw std::domain_error("renorm_dissipative: Lyapunov solution not positive definite (omega too small)");
    cert.cond = mx / mn;
    return cert;
}

std::vector<double> iaxis_sweep(const Eigen::MatrixXcd& A, const std::vector<double>& svals, bool parallel) {
    long n = A.rows();
    return map_indexed(svals.size(), parallel, [&](std::size_t i) {
        Eigen::MatrixXcd M = A - cplx(0.0, svals[i]) * Eigen::MatrixXcd::Identity(n, n);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        return svd.singularValues()(svd.singularValues().size() - 1);
    });
}

CertifiedValue imaginary_axis_lower_bound(const Eigen::MatrixXcd& A, double s_lo, double s_hi, int grid,
                                          bool parallel) {
    if (grid < 2 || !(s_hi > s_lo)) throw std::invalid_argument("imaginary_axis_lower_bound: bad grid/range");
    std::vector<double> svals(static_cast<std::size_t>(grid));
    double step = (s_hi - s_lo) / (grid - 1);
    for (int i = 0; i < grid; ++i) svals[static_cast<std::size_t>(i)] = s_lo + step * i;
    std::vector<double> vals = iaxis_sweep(A, svals, parallel);
    double mn = std::numeric_limits<double>::infinity();
    for (double v : vals) mn = std::min(mn, v);
    // |sigma_min(A-is) - sigma_min(A-is')| <= |s-s'|: half a step covers the range
    return {mn, step / 2 + 1e-12 * std::max(1.0, A.norm()),
            "grid min of sigma_min(A - isI) with Lipschitz-in-s correction"};
}

double verify_left_inverse(const SemigroupModel& L, const SemigroupModel& T,
                           const std::vector<double>& times, const std::vector<Eigen::VectorXcd>& xs) {
    if (L.kind != SemigroupModel::Kind::MatrixExp || T.kind != SemigroupModel::Kind::MatrixExp)
        throw std::invalid_argument("verify_left_inverse: MatrixExp models required");
    if (L.A.rows() != T.A.rows()) throw std::invalid_argument("verify_left_inverse: shape mismatch");
    double worst = 0.0;
    for (double t : times) {
        Eigen::MatrixXcd Lt = evolve_matrix(L.A, t), Tt = evolve_matrix(T.A, t);
        for (const auto& x : xs) worst = std::max(worst, (Lt * (Tt * x) - x).norm());
    }
    return worst;
}

}  // namespace opext::semi
