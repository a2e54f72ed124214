// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <optional>

#include "opext/certified.hpp"
#include "opext/comb.hpp"

namespace opext::semi {

/// Matrix-exponential semigroup T(t) = exp(tA) or the discretized comb.
struct SemigroupModel {
    enum class Kind { MatrixExp, Comb };
    Kind kind = Kind::MatrixExp;
    Eigen::MatrixXcd A;
    CombParams comb;

    static SemigroupModel matrix_exp(Eigen::MatrixXcd a);
    static SemigroupModel comb_model(CombParams p);
};

/// exp(tA) by scaling-and-squaring (t >= 0).
Eigen::MatrixXcd evolve_matrix(const Eigen::MatrixXcd& A, double t);
Eigen::VectorXcd evolve(const SemigroupModel& sg, double t, const Eigen::VectorXcd& x);

/// gamma_T(t) = 1 / inf{||T(t)x|| : ||x|| = 1}; exact for the comb, smallest
/// singular value of exp(tA) for matrices.
CertifiedValue gamma_T(const SemigroupModel& sg, double t);

struct DissipReport {
    bool flag = false;     // -A dissipative w.r.t. <P., .>  (PA + A*P psd)
    double margin = 0.0;   // min eigenvalue of PA + A*P
    Eigen::VectorXcd witness;  // eigenvector of the minimal eigenvalue when negative
};

/// -A dissipative w.r.t. <P.,.> iff PA + A*P is positive semidefinite.
DissipReport dissipativity_check(const Eigen::MatrixXcd& A,
                                 const Eigen::MatrixXcd* P = nullptr);

struct RenormCertificate {
    Eigen::MatrixXcd P;   // positive definite Lyapunov solution
    double omega = 0.0;
    double residual = 0.0;  // ||(A+w)*P + P(A+w) - I||
    double cond = 0.0;      // condition number of P
};

/// Solves (A+w)*P + P(A+w) = I; requires w strictly above the growth
/// estimate max Re eig(-A).  sqrt(cond P) bounds sup_t e^{-wt} ||e^{-tA}||.
RenormCertificate renorm_dissipative(const Eigen::MatrixXcd& A, double omega);

/// Growth estimate alpha-hat = max real part of the eigenvalues of -A.
double growth_estimate(const Eigen::MatrixXcd& A);

/// min over sampled s in [s_lo, s_hi] of sigma_min(A - isI), with the
/// Lipschitz-in-s grid correction as the enclosure radius.
CertifiedValue imaginary_axis_lower_bound(const Eigen::MatrixXcd& A, double s_lo, double s_hi, int grid,
                                          bool parallel = true);

/// Per-grid-point sigma_min(A - i s_j I); OpenMP and serial variants are
/// bitwise identical.
std::vector<double> iaxis_sweep(const Eigen::MatrixXcd& A, const std::vector<double>& svals, bool parallel);

/// max over sample times/vectors of ||L(t) T(t) x - x||.
double verify_left_inverse(const SemigroupModel& L, const SemigroupModel& T,
                           const std::vector<double>& times, const std::vector<Eigen::VectorXcd>& xs);

}  // namespace opext::semi
