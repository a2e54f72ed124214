// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/resolvent.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace opext {

namespace {

Eigen::VectorXcd to_eigen(const SeqVector& v, long n) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    if (auto b = v.blocks.find(0); b != v.blocks.end())
        for (const auto& [i, z] : b->second.entries) {
            if (i < 0 || i >= n) throw std::invalid_argument("apply_resolvent: index outside dense space");
            x(i) = z;
        }
    return x;
}

SeqVector from_eigen(const Eigen::VectorXcd& x, NormP p) {
    SeqVector v = SeqVector::zero(IndexSet::finite(x.size()), p);
    for (long i = 0; i < x.size(); ++i)
        if (x(i) != cplx(0.0)) v.set(0, i, x(i));
    return v;
}

ResolventResult dense_resolvent(const Operator& op, cplx lambda, const SeqVector& v, double tol) {
    const Eigen::MatrixXcd& A = op.dense;
    long n = A.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    double dist = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) dist = std::min(dist, std::abs(lambda - es.eigenvalues()(i)));
    double eig_rad = 1e-10 * std::max(1.0, A.norm());
    if (dist <= eig_rad)
        throw std::domain_error("apply_resolvent: lambda inside or too close to the spectrum");
    Eigen::MatrixXcd M = lambda * Eigen::MatrixXcd::Identity(n, n) - A;
    Eigen::VectorXcd rhs = to_eigen(v, n);
    Eigen::VectorXcd u = M.partialPivLu().solve(rhs);
    double resid = (M * u - rhs).norm();
    if (resid > tol) throw std::domain_error("apply_resolvent: requested tolerance unreachable");
    ResolventResult r{from_eigen(u, v.p), {resid, resid * 1e-12 + 1e-300, "dense solve, measured residual"}};
    return r;
}

// outer Neumann series R(l,T) v = sum_{k>=0} l^{-(k+1)} T^k v, valid |l| > sup w
ResolventResult shift_outer_series(const Operator& op, cplx lambda, const SeqVector& v, double tol) {
    SeqVector u(v.p);
    u.set_block_iset(0, op.iset);
    SeqVector term = v;  // T^k v
    cplx invl = cplx(1.0) / lambda;
    cplx coef = invl;
    long k = 0;
    SeqVector scaled;
    for (;;) {
        scaled = term;
        scaled *= coef;
        u += scaled;
        // residual after truncating at k: ||l^{-(k+1)} T^{k+1} v||
        SeqVector next = apply(op, term);
        double resid = lp_norm(next) * std::abs(coef);
        if (resid <= tol * 0.5 || term.support_size() == 0) {
            return {u, {resid, resid * 1e-12 + 1e-300, "shift Neumann series, truncation residual"}};
        }
        term = std::move(next);
        coef *= invl;
        ++k;
        if (k > 100000) throw std::domain_error("apply_resolvent: tolerance unreachable (series too slow)");
    }
}

// inner series R(l,T) v = -sum_{k>=0} l^k T^{-(k+1)} v, valid |l| < inf w, bilateral
ResolventResult shift_inner_series(const Operator& op, cplx lambda, const SeqVector& v, double tol) {
    auto inv_apply = [&](const SeqVector& x) {
        SeqVector out(x.p);
        out.set_block_iset(0, op.iset);
        if (auto b = x.blocks.find(0); b != x.blocks.end())
            for (const auto& [n, z] : b->second.entries) out.add(0, n - 1, z / op.weights.at_d(n - 1));
        return out;
    };
    SeqVector u(v.p);
    u.set_block_iset(0, op.iset);
    SeqVector term = inv_apply(v);  // T^{-(k+1)} v
    cplx coef = -1.0;
    long k = 0;
    for (;;) {
        SeqVector scaled = term;
        scaled *= coef;
        u += scaled;
        SeqVector next = inv_apply(term);
        double resid = lp_norm(next) * std::abs(coef) * std::abs(lambda);
        if (resid <= tol * 0.5 || term.support_size() == 0)
            return {u, {resid, resid * 1e-12 + 1e-300, "shift inverse-power series, truncation residual"}};
        term = std::move(next);
        coef *= lambda;
        ++k;
        if (k > 100000) throw std::domain_error("apply_resolvent: tolerance unreachable (series too slow)");
    }
}

}  // namespace

ResolventResult apply_resolvent(const Operator& op, cplx lambda, const SeqVector& v, double tol) {
    if (tol <= 0) throw std::invalid_argument("apply_resolvent: tol must be positive");
    switch (op.kind) {
        case Operator::Kind::Dense:
            return dense_resolvent(op, lambda, v, tol);
        case Operator::Kind::Diagonal: {
            double dist = std::numeric_limits<double>::infinity();
            dist = std::min(dist, std::abs(lambda - to_double(op.weights.left_tail)));
            dist = std::min(dist, std::abs(lambda - to_double(op.weights.right_tail)));
            for (long n = op.weights.core_lo(); n < op.weights.core_hi(); ++n)
                dist = std::min(dist, std::abs(lambda - op.weights.at_d(n)));
            if (dist <= 1e-12) throw std::domain_error("apply_resolvent: lambda in the diagonal spectrum");
            SeqVector u(v.p);
            u.set_block_iset(0, op.iset);
            if (auto b = v.blocks.find(0); b != v.blocks.end())
                for (const auto& [n, z] : b->second.entries) u.set(0, n, z / (lambda - op.weights.at_d(n)));
            return {u, {0.0, 1e-300, "diagonal resolvent, exact per entry"}};
        }
        case Operator::Kind::WeightedShift: {
            SpectrumDesc enc = shift_spectral_enclosure(op.weights, op.iset);
            double al = std::abs(lambda);
            if (al > enc.outer() * (1.0 + 1e-12) + 1e-15) return shift_outer_series(op, lambda, v, tol);
            if (op.iset.kind == IndexKind::Integers && al < enc.inner() * (1.0 - 1e-12))
                return shift_inner_series(op, lambda, v, tol);
            throw std::domain_error(
                "apply_resolvent: lambda inside the certified spectral enclosure of the shift");
        }
        default:
            throw std::invalid_argument("apply_resolvent: unsupported operator variant");
    }
}

PseudoResolventReport check_pseudo_resolvent(const PseudoResolventFamily& fam,
                                             const std::vector<std::pair<int, int>>& sample_pairs) {
    if (fam.lambdas.size() != fam.ops.size() || fam.ops.empty())
        throw std::invalid_argument("check_pseudo_resolvent: malformed family");
    long n = fam.ops[0].rows();
    for (const auto& m : fam.ops)
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("check_pseudo_resolvent: shape mismatch");

    PseudoResolventReport rep;
    for (auto [i, j] : sample_pairs) {
        const auto& Rl = fam.ops.at(static_cast<std::size_t>(i));
        const auto& Rm = fam.ops.at(static_cast<std::size_t>(j));
        cplx l = fam.lambdas.at(static_cast<std::size_t>(i));
        cplx m = fam.lambdas.at(static_cast<std::size_t>(j));
        Eigen::MatrixXcd resid = Rl - Rm - (m - l) * (Rl * Rm);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(resid);
        rep.max_residual = std::max(rep.max_residual, svd.singularValues()(0));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fam.ops[0]);
    rep.kernel_sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    rep.kernel_trivial = rep.kernel_sigma_min > 1e-10 * std::max(1.0, svd.singularValues()(0));
    return rep;
}

}  // namespace opext
