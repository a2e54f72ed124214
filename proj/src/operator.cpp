// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/operator.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace opext {

namespace {

constexpr double kDenseEigTol = 1e-12;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double dense_sigma_min(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double dense_sigma_max(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

// worst-case enclosure radius for Jacobi SVD singular values
double svd_radius(const Eigen::MatrixXcd& m) {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm());
}

}  // namespace

Operator Operator::dense_op(Eigen::MatrixXcd m) {
    require(m.rows() == m.cols() && m.rows() >= 1, "dense_op: square nonempty matrix required");
    require(m.rows() <= 32, "dense_op: dense dimension limited to 32");
    Operator op;
    op.kind = Kind::Dense;
    op.dense = std::move(m);
    op.iset = IndexSet::finite(op.dense.rows());
    return op;
}

Operator Operator::weighted_shift(WeightSeq w, IndexSet is) {
    require(is.kind != IndexKind::Finite, "weighted_shift: index set must be naturals or integers");
    w.validate();
    Operator op;
    op.kind = Kind::WeightedShift;
    op.weights = std::move(w);
    op.iset = is;
    return op;
}

Operator Operator::diagonal(WeightSeq w, IndexSet is) {
    w.validate();
    Operator op;
    op.kind = Kind::Diagonal;
    op.weights = std::move(w);
    op.iset = is;
    return op;
}

Operator Operator::direct_sum(std::vector<Operator> summands) {
    require(!summands.empty(), "direct_sum: needs at least one summand");
    Operator op;
    op.kind = Kind::DirectSum;
    op.parts = std::move(summands);
    return op;
}

Operator Operator::block2x2(Operator a11, Operator a12, Operator a21, Operator a22) {
    Operator op;
    op.kind = Kind::Block2x2;
    op.parts = {std::move(a11), std::move(a12), std::move(a21), std::move(a22)};
    return op;
}

Operator Operator::affine_shift(Operator base, cplx lambda) {
    Operator op;
    op.kind = Kind::AffineShift;
    op.parts = {std::move(base)};
    op.scalar = lambda;
    return op;
}

Operator Operator::scaled(Operator base, cplx factor) {
    Operator op;
    op.kind = Kind::Scaled;
    op.parts = {std::move(base)};
    op.scalar = factor;
    return op;
}

const char* Operator::kind_name() const {
    switch (kind) {
        case Kind::Dense: return "dense";
        case Kind::WeightedShift: return "weighted_shift";
        case Kind::Diagonal: return "diagonal";
        case Kind::DirectSum: return "direct_sum";
        case Kind::Block2x2: return "block2x2";
        case Kind::AffineShift: return "affine_shift";
        case Kind::Scaled: return "scaled";
    }
    return "?";
}

namespace {

SeqVector apply_simple(const Operator& op, const SeqVector& v) {
    require(v.single_block(), "apply: composite vector fed to a simple operator");
    SeqVector out(v.p);
    switch (op.kind) {
        case Operator::Kind::Dense: {
            long n = op.dense.rows();
            out.set_block_iset(0, IndexSet::finite(n));
            if (auto b = v.blocks.find(0); b != v.blocks.end()) {
                require(b->second.iset == IndexSet::finite(n) || b->second.entries.empty() ||
                            (b->second.entries.rbegin()->first < n && b->second.entries.begin()->first >= 0),
                        "apply: vector does not fit the dense operator's space");
                for (const auto& [j, z] : b->second.entries) {
                    require(j >= 0 && j < n, "apply: index outside finite space");
                    for (long i = 0; i < n; ++i) {
                        cplx a = op.dense(i, j);
                        if (a != cplx(0.0)) out.add(0, i, a * z);
                    }
                }
            }
            return out;
        }
        case Operator::Kind::WeightedShift: {
            out.set_block_iset(0, op.iset);
            if (auto b = v.blocks.find(0); b != v.blocks.end()) {
                for (const auto& [j, z] : b->second.entries) {
                    require(op.iset.contains(j), "apply: index set mismatch for shift");
                    out.add(0, j + 1, op.weights.at_d(j) * z);
                }
            }
            return out;
        }
        case Operator::Kind::Diagonal: {
            out.set_block_iset(0, op.iset);
            if (auto b = v.blocks.find(0); b != v.blocks.end()) {
                for (const auto& [j, z] : b->second.entries) {
                    require(op.iset.contains(j), "apply: index set mismatch for diagonal");
                    out.add(0, j, op.weights.at_d(j) * z);
                }
            }
            return out;
        }
        default: break;
    }
    throw std::logic_error("apply_simple: not simple");
}

}  // namespace

SeqVector apply(const Operator& op, const SeqVector& v) {
    switch (op.kind) {
        case Operator::Kind::Dense:
        case Operator::Kind::WeightedShift:
        case Operator::Kind::Diagonal:
            return apply_simple(op, v);
        case Operator::Kind::DirectSum: {
            SeqVector out(v.p);
            for (const auto& [k, blk] : v.blocks) {
                require(k >= 0 && k < static_cast<long>(op.parts.size()),
                        "apply: block index outside direct sum");
                out.put_block(k, apply(op.parts[static_cast<std::size_t>(k)], v.block_vector(k)));
            }
            return out;
        }
        case Operator::Kind::Block2x2: {
            for (const auto& [k, blk] : v.blocks)
                require(k == 0 || k == 1, "apply: block2x2 expects a two-block vector");
            SeqVector v0 = v.block_vector(0), v1 = v.block_vector(1);
            SeqVector r0 = apply(op.parts[0], v0) + apply(op.parts[1], v1);
            SeqVector r1 = apply(op.parts[2], v0) + apply(op.parts[3], v1);
            SeqVector out(v.p);
            out.put_block(0, r0);
            out.put_block(1, r1);
            return out;
        }
        case Operator::Kind::AffineShift: {
            SeqVector out = v;
            out *= op.scalar;
            out -= apply(op.parts[0], v);
            return out;
        }
        case Operator::Kind::Scaled: {
            SeqVector out = apply(op.parts[0], v);
            out *= op.scalar;
            return out;
        }
    }
    throw std::logic_error("apply: unreachable");
}

CertifiedValue lower_bound_constant(const Operator& op) {
    switch (op.kind) {
        case Operator::Kind::Dense:
            return {dense_sigma_min(op.dense), svd_radius(op.dense), "smallest singular value (Jacobi SVD)"};
        case Operator::Kind::WeightedShift:
        case Operator::Kind::Diagonal:
            return {to_double(op.weights.inf()), 0.0, "inf of the weights, attained over tails and core"};
        default:
            throw std::invalid_argument("lower_bound_constant: unsupported composite variant");
    }
}

CertifiedValue operator_norm(const Operator& op) {
    switch (op.kind) {
        case Operator::Kind::Dense:
            return {dense_sigma_max(op.dense), svd_radius(op.dense), "largest singular value (Jacobi SVD)"};
        case Operator::Kind::WeightedShift:
        case Operator::Kind::Diagonal:
            return {to_double(op.weights.sup()), 0.0, "sup of the weights"};
        case Operator::Kind::DirectSum: {
            double lo = 0.0, hi = 0.0, rad = 0.0;
            for (const auto& part : op.parts) {
                CertifiedValue cv = operator_norm(part);
                lo = std::max(lo, cv.value);
                hi = std::max(hi, cv.value);
                rad = std::max(rad, cv.radius);
            }
            return {hi, rad, "max over summands (exact block rule)"};
        }
        case Operator::Kind::Block2x2: {
            // exact when all four blocks are dense; enclosure otherwise
            bool all_dense = true;
            for (const auto& part : op.parts) all_dense &= part.kind == Operator::Kind::Dense;
            if (all_dense) {
                Eigen::MatrixXcd m = to_dense_matrix(op);
                return {dense_sigma_max(m), svd_radius(m), "largest singular value of the assembled block matrix"};
            }
            double n11 = operator_norm(op.parts[0]).upper(), n12 = operator_norm(op.parts[1]).upper();
            double n21 = operator_norm(op.parts[2]).upper(), n22 = operator_norm(op.parts[3]).upper();
            Eigen::Matrix2d g;
            g << n11, n12, n21, n22;
            double hi = g.jacobiSvd().singularValues()(0);
            double lo = std::max(std::max(n11, n12), std::max(n21, n22));
            return {(hi + lo) / 2, (hi - lo) / 2 + 1e-15 * hi, "block norm enclosure [max block, 2x2 gram bound]"};
        }
        case Operator::Kind::AffineShift: {
            CertifiedValue base = operator_norm(op.parts[0]);
            if (op.parts[0].kind == Operator::Kind::Dense) {
                Eigen::MatrixXcd m = to_dense_matrix(op);
                return {dense_sigma_max(m), svd_radius(m), "largest singular value"};
            }
            double hi = std::abs(op.scalar) + base.upper();
            double lo = std::max(0.0, std::max(std::abs(op.scalar) - base.upper(),
                                               base.lower() - std::abs(op.scalar)));
            return {(hi + lo) / 2, (hi - lo) / 2, "triangle-inequality enclosure for lambda*I - base"};
        }
        case Operator::Kind::Scaled: {
            CertifiedValue base = operator_norm(op.parts[0]);
            double a = std::abs(op.scalar);
            return {a * base.value, a * base.radius + 1e-16 * a * base.value, "scaled norm"};
        }
    }
    throw std::logic_error("operator_norm: unreachable");
}

SpectrumDesc spectrum_dense(const Operator& op) {
    require(op.kind == Operator::Kind::Dense, "spectrum_dense: Dense variant required");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.dense, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum_dense: eigensolver failed");
    std::vector<cplx> pts(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return SpectrumDesc::finite_points(std::move(pts));
}

std::pair<Operator, Operator> polar_decompose(const Operator& op) {
    switch (op.kind) {
        case Operator::Kind::Dense: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.dense, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const auto& s = svd.singularValues();
            long n = op.dense.rows();
            double tol = kDenseEigTol * std::max(1.0, s(0));
            Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
            for (long i = 0; i < n; ++i)
                if (s(i) > tol) U += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
            Eigen::MatrixXcd P = svd.matrixV() * s.asDiagonal() * svd.matrixV().adjoint();
            return {Operator::dense_op(U), Operator::dense_op(P)};
        }
        case Operator::Kind::WeightedShift: {
            // exact: op* op = Diagonal(w^2), P = Diagonal(w), U = unweighted shift
            return {Operator::weighted_shift(WeightSeq::constant(Rat(1)), op.iset),
                    Operator::diagonal(op.weights, op.iset)};
        }
        case Operator::Kind::Diagonal: {
            // positive diagonal: already its own modulus
            return {Operator::diagonal(WeightSeq::constant(Rat(1)), op.iset),
                    Operator::diagonal(op.weights, op.iset)};
        }
        default:
            throw std::invalid_argument("polar_decompose: unsupported variant");
    }
}

SpectrumDesc shift_spectral_enclosure(const WeightSeq& w, const IndexSet& is) {
    double outer = to_double(w.sup());
    if (is.kind == IndexKind::Integers) {
        double inner = to_double(w.inf());
        return SpectrumDesc::annulus(std::min(inner, outer), outer);
    }
    return SpectrumDesc::annulus(0.0, outer);  // unilateral: disk enclosure
}

Eigen::MatrixXcd to_dense_matrix(const Operator& op) {
    switch (op.kind) {
        case Operator::Kind::Dense:
            return op.dense;
        case Operator::Kind::DirectSum: {
            long n = 0;
            std::vector<Eigen::MatrixXcd> ms;
            for (const auto& p : op.parts) {
                ms.push_back(to_dense_matrix(p));
                n += ms.back().rows();
            }
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
            long at = 0;
            for (const auto& blk : ms) {
                m.block(at, at, blk.rows(), blk.cols()) = blk;
                at += blk.rows();
            }
            return m;
        }
        case Operator::Kind::Block2x2: {
            Eigen::MatrixXcd a = to_dense_matrix(op.parts[0]), b = to_dense_matrix(op.parts[1]);
            Eigen::MatrixXcd c = to_dense_matrix(op.parts[2]), d = to_dense_matrix(op.parts[3]);
            require(a.rows() == b.rows() && c.rows() == d.rows() && a.cols() == c.cols() && b.cols() == d.cols(),
                    "to_dense_matrix: inconsistent block dimensions");
            Eigen::MatrixXcd m(a.rows() + c.rows(), a.cols() + b.cols());
            m << a, b, c, d;
            return m;
        }
        case Operator::Kind::AffineShift: {
            Eigen::MatrixXcd base = to_dense_matrix(op.parts[0]);
            return op.scalar * Eigen::MatrixXcd::Identity(base.rows(), base.cols()) - base;
        }
        case Operator::Kind::Scaled:
            return op.scalar * to_dense_matrix(op.parts[0]);
        default:
            throw std::invalid_argument("to_dense_matrix: operator is not finite-dimensional");
    }
}

}  // namespace opext
