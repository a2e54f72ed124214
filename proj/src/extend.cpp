// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/extend.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <random>
#include <stdexcept>

namespace opext::extend {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

Eigen::VectorXcd block_to_eigen(const SeqVector& v, int block, long n) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    auto b = v.blocks.find(block);
    if (b != v.blocks.end())
        for (const auto& [i, z] : b->second.entries) {
            require(i >= 0 && i < n, "bundle: index outside the dense factor");
            x(i) = z;
        }
    return x;
}

void eigen_to_block(SeqVector& v, int block, const Eigen::VectorXcd& x) {
    v.blocks[block].iset = IndexSet::finite(x.size());
    v.blocks[block].entries.clear();
    for (long i = 0; i < x.size(); ++i)
        if (x(i) != cplx(0.0)) v.blocks[block].entries[i] = x(i);
}

double min_eig_distance(const Eigen::MatrixXcd& A, cplx mu) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    double d = std::numeric_limits<double>::infinity();
    for (long i = 0; i < es.eigenvalues().size(); ++i) d = std::min(d, std::abs(es.eigenvalues()(i) - mu));
    return d;
}

}  // namespace

std::string AmbientDesc::str() const {
    std::string ps = p == NormP::One ? "1" : (p == NormP::Two ? "2" : "sup");
    switch (kind) {
        case Kind::SameSpace: return "X itself (" + base.str() + ", p=" + ps + ")";
        case Kind::PairSpace: return "X x X (" + base.str() + ", p=" + ps + ")";
        case Kind::TowerSpace: return "X (+) l_p-sum of copies of Y (" + base.str() + ", p=" + ps + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// ExtensionBundle actions
// ---------------------------------------------------------------------------

SeqVector ExtensionBundle::embed(const SeqVector& x) const {
    require(x.single_block(), "embed: expects a vector of X");
    SeqVector z(x.p);
    z.put_block(0, x);
    return z;
}

namespace {
// tower vectors carry one scalar per copy of Y = span{e0}
void validate_tower(const SeqVector& z) {
    for (const auto& [k, blk] : z.blocks)
        if (k >= 1)
            for (const auto& [n, w] : blk.entries)
                require(n == 0, "tower vector: blocks k >= 1 live in Y = span{e0}");
}
}  // namespace

SeqVector ExtensionBundle::apply_B(const SeqVector& z) const {
    switch (kind) {
        case Kind::TrivialDense: {
            SeqVector out(z.p);
            long n = A.dense.rows();
            eigen_to_block(out, 0, A.dense * block_to_eigen(z, 0, n));
            return out;
        }
        case Kind::MinimalShift: {
            validate_tower(z);
            SeqVector out(z.p);
            out.set_block_iset(0, IndexSet::naturals());
            SeqVector x0 = apply(A, z.block_vector(0));
            if (auto b = x0.blocks.find(0); b != x0.blocks.end())
                for (const auto& [i, w] : b->second.entries) out.add(0, i, w);
            out.add(0, 0, c * z.coeff(1, 0));
            for (const auto& [k, blk] : z.blocks) {
                if (k < 2) continue;
                cplx y = z.coeff(k, 0);
                if (y != cplx(0.0)) out.add(k - 1, 0, c * y);
            }
            return out;
        }
        case Kind::PolarDense: {
            long n = A.dense.rows();
            Eigen::VectorXcd v(2 * n);
            v << block_to_eigen(z, 0, n), block_to_eigen(z, 1, n);
            Eigen::VectorXcd r = Btilde * v;
            SeqVector out(z.p);
            eigen_to_block(out, 0, r.head(n));
            eigen_to_block(out, 1, r.tail(n));
            return out;
        }
        case Kind::PolarShift: {
            SeqVector out(z.p);
            out.set_block_iset(0, IndexSet::naturals());
            out.set_block_iset(1, IndexSet::naturals());
            SeqVector x0 = apply(A, z.block_vector(0));
            if (auto b = x0.blocks.find(0); b != x0.blocks.end())
                for (const auto& [i, w] : b->second.entries) out.add(0, i, w);
            out.add(0, 0, c * z.coeff(1, 0));  // c (I - UU*) x2 = c x2[0] e0
            if (auto b = z.blocks.find(1); b != z.blocks.end())
                for (const auto& [i, w] : b->second.entries)
                    if (i >= 1) out.add(1, i - 1, c * w);  // c U* x2
            return out;
        }
    }
    throw std::logic_error("apply_B: unreachable");
}

SeqVector ExtensionBundle::apply_Binv(const SeqVector& z) const {
    switch (kind) {
        case Kind::TrivialDense: {
            SeqVector out(z.p);
            eigen_to_block(out, 0, Ainv * block_to_eigen(z, 0, A.dense.rows()));
            return out;
        }
        case Kind::MinimalShift: {
            validate_tower(z);
            // z0 = A x + y0 with y0 = z0[0] e0; x[n] = z0[n+1] / w_n
            SeqVector out(z.p);
            out.set_block_iset(0, IndexSet::naturals());
            cplx y0 = z.coeff(0, 0);
            if (auto b = z.blocks.find(0); b != z.blocks.end())
                for (const auto& [i, w] : b->second.entries)
                    if (i >= 1) out.add(0, i - 1, w / A.weights.at_d(i - 1));
            if (y0 != cplx(0.0)) out.add(1, 0, y0 / c);
            for (const auto& [k, blk] : z.blocks) {
                if (k < 1) continue;
                cplx y = z.coeff(k, 0);
                if (y != cplx(0.0)) out.add(k + 1, 0, y / c);
            }
            return out;
        }
        case Kind::PolarDense: {
            long n = A.dense.rows();
            Eigen::VectorXcd v(2 * n);
            v << block_to_eigen(z, 0, n), block_to_eigen(z, 1, n);
            Eigen::VectorXcd r = BtildeInv * v;
            SeqVector out(z.p);
            eigen_to_block(out, 0, r.head(n));
            eigen_to_block(out, 1, r.tail(n));
            return out;
        }
        case Kind::PolarShift: {
            // [[P^{-1} U*, 0], [c^{-1}(I-UU*), c^{-1} U]]
            SeqVector out(z.p);
            out.set_block_iset(0, IndexSet::naturals());
            out.set_block_iset(1, IndexSet::naturals());
            if (auto b = z.blocks.find(0); b != z.blocks.end())
                for (const auto& [i, w] : b->second.entries)
                    if (i >= 1) out.add(0, i - 1, w / A.weights.at_d(i - 1));
            out.add(1, 0, z.coeff(0, 0) / c);
            if (auto b = z.blocks.find(1); b != z.blocks.end())
                for (const auto& [i, w] : b->second.entries) out.add(1, i + 1, w / c);
            return out;
        }
    }
    throw std::logic_error("apply_Binv: unreachable");
}

ResolventResult ExtensionBundle::apply_resolvent_B(cplx lambda, const SeqVector& z, double tol) const {
    switch (kind) {
        case Kind::TrivialDense:
            return apply_resolvent(A, lambda, z, tol);
        case Kind::MinimalShift: {
            validate_tower(z);
            SpectrumDesc enc = shift_spectral_enclosure(A.weights, A.iset);
            require(std::abs(lambda) > std::max(enc.outer(), c) + 1e-12,
                    "resolvent: |lambda| must exceed the certified spectral radius of A");
            // eta_k = sum_j c^j lambda^{-(j+1)} y_{k+j};  finite sums
            long kmax = 0;
            for (const auto& [k, blk] : z.blocks)
                if (k >= 1 && !blk.entries.empty()) kmax = std::max<long>(kmax, k);
            std::vector<cplx> y(static_cast<std::size_t>(kmax) + 1, 0.0);
            for (long k = 1; k <= kmax; ++k) y[static_cast<std::size_t>(k)] = z.coeff(static_cast<int>(k), 0);
            SeqVector out(z.p);
            out.set_block_iset(0, IndexSet::naturals());
            cplx forcing = 0.0;  // sum_j c^{j+1} lambda^{-(j+1)} y_{j+1}
            for (long k = 1; k <= kmax; ++k) {
                cplx eta = 0.0, coef = cplx(1.0) / lambda;
                for (long j = 0; k + j <= kmax; ++j) {
                    eta += coef * y[static_cast<std::size_t>(k + j)];
                    coef *= c / lambda;
                }
                if (eta != cplx(0.0)) out.add(static_cast<int>(k), 0, eta);
                if (k == 1) {
                    cplx coef2 = c / lambda;
                    for (long j = 1; j <= kmax; ++j) {
                        forcing += coef2 * y[static_cast<std::size_t>(j)];
                        coef2 *= c / lambda;
                    }
                }
            }
            SeqVector rhs = z.block_vector(0);
            if (forcing != cplx(0.0)) rhs.add(0, 0, forcing);  // the tower forcing lives in Y = span{e0}
            ResolventResult ra = apply_resolvent(A, lambda, rhs, tol);
            for (const auto& [i, w] : ra.u.blocks[0].entries) out.add(0, i, w);
            return {out, {ra.residual.value, ra.residual.radius, "extension resolvent: exact tower sums + base residual"}};
        }
        case Kind::PolarDense: {
            long n = A.dense.rows();
            require(std::abs(lambda) > c + 1e-12, "resolvent: need |lambda| > c for the cU* block");
            Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
            Eigen::MatrixXcd RA = (lambda * I - A.dense).partialPivLu().solve(I);
            Eigen::MatrixXcd RUs = (lambda * I - c * U.adjoint()).partialPivLu().solve(I);
            Eigen::MatrixXcd topright = RA * (c * (I - U * U.adjoint())) * RUs;
            Eigen::VectorXcd v(2 * n);
            v << block_to_eigen(z, 0, n), block_to_eigen(z, 1, n);
            Eigen::VectorXcd r(2 * n);
            r.head(n) = RA * v.head(n) + topright * v.tail(n);
            r.tail(n) = RUs * v.tail(n);
            Eigen::MatrixXcd Mfull = lambda * Eigen::MatrixXcd::Identity(2 * n, 2 * n) - Btilde;
            double resid = (Mfull * r - v).norm();
            SeqVector out(z.p);
            eigen_to_block(out, 0, r.head(n));
            eigen_to_block(out, 1, r.tail(n));
            return {out, {resid, resid * 1e-12 + 1e-300, "assembled block resolvent, measured residual"}};
        }
        case Kind::PolarShift: {
            SpectrumDesc enc = shift_spectral_enclosure(A.weights, A.iset);
            require(std::abs(lambda) > std::max(enc.outer(), c) + 1e-12,
                    "resolvent: |lambda| must exceed the certified spectral radius of A");
            // R(l, cU*) on finitely supported vectors is a finite sum because
            // (U*)^j e_i = e_{i-j} vanishes once j > i.
            auto r_ustar = [&](const SeqVector& x2) {
                SeqVector r(x2.p);
                r.set_block_iset(0, IndexSet::naturals());
                if (auto b = x2.blocks.find(0); b != x2.blocks.end())
                    for (const auto& [i, w] : b->second.entries) {
                        cplx coef = cplx(1.0) / lambda;
                        for (long j = 0; j <= i; ++j) {
                            r.add(0, i - j, coef * w);
                            coef *= c / lambda;
                        }
                    }
                return r;
            };
            SeqVector z2 = z.block_vector(1);
            SeqVector r2 = r_ustar(z2);
            SeqVector rhs = z.block_vector(0);
            rhs.add(0, 0, c * r2.coeff(0, 0));  // c(I-UU*) r2 = c r2[0] e0
            ResolventResult ra = apply_resolvent(A, lambda, rhs, tol);
            SeqVector out(z.p);
            out.put_block(0, ra.u);
            out.put_block(1, r2);
            return {out, {ra.residual.value, ra.residual.radius, "block resolvent: exact U* series + base residual"}};
        }
    }
    throw std::logic_error("apply_resolvent_B: unreachable");
}

CertifiedValue ExtensionBundle::norm_Binv() const {
    switch (kind) {
        case Kind::TrivialDense: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ainv);
            return {svd.singularValues()(0), 1e-12 * svd.singularValues()(0), "largest singular value of A^{-1}"};
        }
        case Kind::PolarDense: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(BtildeInv);
            return {svd.singularValues()(0), 1e-12 * svd.singularValues()(0),
                    "largest singular value of the explicit block inverse"};
        }
        case Kind::MinimalShift:
            // B is the bilateral shift with weights (c on n<0, w_n on n>=0);
            // the inverse divides by those weights: norm = 1/min(c, inf w) = 1/c.
            return {1.0 / c, 0.0, "exact: inverse shift column norms, sup 1/weight = 1/c"};
        case Kind::PolarShift:
            // ||Btilde(x1,x2)||^2 = ||A x1||^2 + c^2 ||x2||^2 >= c^2 ||(x1,x2)||^2,
            // attained on (0, e_k): sigma_min = c exactly.
            return {1.0 / c, 0.0, "exact via the norm identity ||B(x1,x2)||^2 = ||Ax1||^2 + c^2||x2||^2"};
    }
    throw std::logic_error("norm_Binv: unreachable");
}

int ExtensionBundle::grade_dim(int k) const {
    if (k < 0) return 0;
    switch (kind) {
        case Kind::TrivialDense:
        case Kind::PolarDense:
            return 0;  // invertible dense A: Z_k = {0}
        case Kind::MinimalShift:
        case Kind::PolarShift:
            return 1;
    }
    return 0;
}

SeqVector ExtensionBundle::grade_basis(int k, int j) const {
    require(j == 0 && grade_dim(k) == 1, "grade_basis: out of range");
    SeqVector z(ambient.p);
    if (kind == Kind::MinimalShift) {
        z.set(k + 1, 0, 1.0);  // k-th copy of Y = span{e0}
    } else if (kind == Kind::PolarShift) {
        z.set(1, k, 1.0);  // Z_k = {0} x span{e_k}
    } else {
        throw std::invalid_argument("grade_basis: bundle has trivial grades");
    }
    return z;
}

SeqVector ExtensionBundle::from_lattice(const SeqVector& bilateral) const {
    require(kind == Kind::MinimalShift || kind == Kind::PolarShift, "from_lattice: shift bundles only");
    SeqVector z(ambient.p);
    z.set_block_iset(0, IndexSet::naturals());
    if (auto b = bilateral.blocks.find(0); b != bilateral.blocks.end())
        for (const auto& [n, w] : b->second.entries) {
            if (n >= 0)
                z.add(0, n, w);
            else if (kind == Kind::MinimalShift)
                z.add(static_cast<int>(-n), 0, w);
            else
                z.add(1, -n - 1, w);
        }
    return z;
}

SeqVector ExtensionBundle::to_lattice(const SeqVector& z) const {
    require(kind == Kind::MinimalShift || kind == Kind::PolarShift, "to_lattice: shift bundles only");
    SeqVector v = SeqVector::zero(IndexSet::integers(), ambient.p);
    for (const auto& [k, blk] : z.blocks) {
        for (const auto& [n, w] : blk.entries) {
            if (k == 0)
                v.add(0, n, w);
            else if (kind == Kind::MinimalShift) {
                require(n == 0, "to_lattice: tower blocks are multiples of e0");
                v.add(0, -static_cast<long>(k), w);
            } else {
                v.add(0, -n - 1, w);
            }
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

ExtensionBundle minimal_invertible_extension(const Operator& A, const ComplementDesc& comp, double c,
                                             NormP p) {
    require(c > 0, "minimal_invertible_extension: c must be positive");
    CertifiedValue lbc = lower_bound_constant(A);
    require(c <= lbc.lower() + 1e-12, "minimal_invertible_extension: c exceeds the certified lower bound");

    if (A.kind == Operator::Kind::Dense) {
        // bounded-below square dense matrices are invertible: Y = {0}, B = A
        require(comp.ortho || comp.basis.empty(),
                "minimal_invertible_extension: invertible A admits only the trivial complement");
        ExtensionBundle b;
        b.kind = ExtensionBundle::Kind::TrivialDense;
        b.c = c;
        b.minimal = true;
        b.A = A;
        b.ambient = {AmbientDesc::Kind::SameSpace, p, IndexSet::finite(A.dense.rows())};
        b.Ainv = A.dense.partialPivLu().solve(Eigen::MatrixXcd::Identity(A.dense.rows(), A.dense.cols()));
        return b;
    }
    if (A.kind == Operator::Kind::WeightedShift && A.iset.kind == IndexKind::Naturals) {
        if (!comp.ortho) {
            require(comp.basis.size() == 1, "minimal_invertible_extension: complement of ran A has dimension 1");
            const SeqVector& b0 = comp.basis[0];
            bool only_e0 = b0.single_block() && b0.support_size() == 1 && b0.coeff(0, 0) != cplx(0.0);
            require(only_e0, "minimal_invertible_extension: complement check failed (need span{e0})");
        }
        ExtensionBundle b;
        b.kind = ExtensionBundle::Kind::MinimalShift;
        b.c = c;
        b.minimal = true;
        b.A = A;
        b.ambient = {AmbientDesc::Kind::TowerSpace, p, IndexSet::naturals()};
        return b;
    }
    throw std::invalid_argument(
        "minimal_invertible_extension: supported inputs are invertible Dense and unilateral WeightedShift");
}

ExtensionBundle polar_extension(const Operator& A, double c, bool minimal) {
    require(c > 0, "polar_extension: c must be positive");
    CertifiedValue lbc = lower_bound_constant(A);
    require(c <= lbc.lower() + 1e-12, "polar_extension: lower_bound_constant(A) >= c required");

    if (A.kind == Operator::Kind::Dense) {
        auto [Uo, Po] = polar_decompose(A);
        long n = A.dense.rows();
        Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd Um = Uo.dense, Pm = Po.dense;
        require(lower_bound_constant(Po).value > 1e-14, "polar_extension: P not invertible within tolerance");
        Eigen::MatrixXcd Pinv = Pm.partialPivLu().solve(I);
        ExtensionBundle b;
        b.c = c;
        b.minimal = minimal;
        b.A = A;
        b.U = Um;
        b.P = Pm;
        if (minimal) {
            // A is invertible (sigma_min >= c > 0): every Z_k is {0}, Z = X, B = A.
            b.kind = ExtensionBundle::Kind::TrivialDense;
            b.ambient = {AmbientDesc::Kind::SameSpace, NormP::Two, IndexSet::finite(n)};
            b.Ainv = A.dense.partialPivLu().solve(I);
            return b;
        }
        b.kind = ExtensionBundle::Kind::PolarDense;
        b.ambient = {AmbientDesc::Kind::PairSpace, NormP::Two, IndexSet::finite(n)};
        b.Btilde = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        b.Btilde.topLeftCorner(n, n) = A.dense;
        b.Btilde.topRightCorner(n, n) = c * (I - Um * Um.adjoint());
        b.Btilde.bottomRightCorner(n, n) = c * Um.adjoint();
        b.BtildeInv = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        b.BtildeInv.topLeftCorner(n, n) = Pinv * Um.adjoint();
        b.BtildeInv.bottomLeftCorner(n, n) = (1.0 / c) * (I - Um * Um.adjoint());
        b.BtildeInv.bottomRightCorner(n, n) = (1.0 / c) * Um;
        return b;
    }
    if (A.kind == Operator::Kind::WeightedShift && A.iset.kind == IndexKind::Naturals) {
        ExtensionBundle b;
        b.kind = ExtensionBundle::Kind::PolarShift;
        b.c = c;
        b.minimal = minimal;
        b.A = A;
        b.ambient = {AmbientDesc::Kind::PairSpace, NormP::Two, IndexSet::naturals()};
        return b;
    }
    throw std::invalid_argument("polar_extension: A must be Dense or a unilateral WeightedShift on l2");
}

BundleView view(const ExtensionBundle& b) {
    BundleView v;
    v.c = b.c;
    v.apply_B = [&b](const SeqVector& z) { return b.apply_B(z); };
    v.apply_Binv = [&b](const SeqVector& z) { return b.apply_Binv(z); };
    v.embed = [&b](const SeqVector& x) { return b.embed(x); };
    v.grade_dim = [&b](int k) { return b.grade_dim(k); };
    v.grade_basis = [&b](int k, int j) { return b.grade_basis(k, j); };
    return v;
}

UniversalityResult universality_map(const BundleView& minimal_bundle, const BundleView& other,
                                    int max_grade, int samples_per_grade) {
    // hypothesis check: ||C^{-1}|| <= c^{-1} forces ||C w|| >= c ||w|| on the
    // sampled grade bases; c^{-1} C is unitary between grades when the ratio
    // is exactly 1.
    bool unit = true;
    for (int k = 0; k <= max_grade; ++k) {
        for (int j = 0; j < std::min(other.grade_dim(k), samples_per_grade); ++j) {
            SeqVector w = other.grade_basis(k, j);
            double ratio = lp_norm(other.apply_B(w)) / (other.c * lp_norm(w));
            if (ratio < 1.0 - 1e-9)
                throw std::invalid_argument("universality_map: other violates ||C^{-1}|| <= c^{-1}");
            if (std::abs(ratio - 1.0) > 1e-9) unit = false;
        }
    }

    auto pi = [minimal_bundle, other](const SeqVector& z, int grade) {
        if (grade < 0) {
            // z is (the embedding of) a vector of X: act as the identity
            return other.embed(z.block_vector(0));
        }
        SeqVector b = z;
        for (int i = 0; i <= grade; ++i) b = minimal_bundle.apply_B(b);
        // B^{k+1} z lies in X; re-embed into W and pull back with C^{-(k+1)}
        SeqVector w = other.embed(b.block_vector(0));
        for (int i = 0; i <= grade; ++i) w = other.apply_Binv(w);
        return w;
    };

    double dev = 0.0;
    bool pi_isometric = true;
    for (int k = 0; k <= max_grade; ++k) {
        for (int j = 0; j < std::min(minimal_bundle.grade_dim(k), samples_per_grade); ++j) {
            SeqVector z = minimal_bundle.grade_basis(k, j);
            SeqVector lhs = other.apply_B(pi(z, k));
            SeqVector rhs = pi(minimal_bundle.apply_B(z), k - 1);
            dev = std::max(dev, lp_norm(lhs - rhs));
            if (std::abs(lp_norm(pi(z, k)) - lp_norm(z)) > 1e-9) pi_isometric = false;
        }
    }

    UniversalityResult r;
    r.pi = pi;
    r.is_unitary = unit && pi_isometric;
    r.max_deviation = dev;
    return r;
}

// ---------------------------------------------------------------------------
// Truncated quotient-norm program (sum of Euclidean norms, unconstrained)
// ---------------------------------------------------------------------------

namespace {

struct ArensObjective {
    const Eigen::MatrixXcd& A;
    const Eigen::VectorXcd& x;
    int N;

    // residual blocks r_0..r_N for the column matrix F
    std::vector<Eigen::VectorXcd> residuals(const Eigen::MatrixXcd& F) const {
        std::vector<Eigen::VectorXcd> r(static_cast<std::size_t>(N) + 1);
        r[0] = x - F.col(0);
        for (int nn = 1; nn < N; ++nn) r[static_cast<std::size_t>(nn)] = F.col(nn) - A * F.col(nn - 1);
        r[static_cast<std::size_t>(N)] = A * F.col(N - 1);
        return r;
    }

    double value(const Eigen::MatrixXcd& F) const {
        double v = 0.0;
        for (const auto& r : residuals(F)) v += r.norm();
        return v;
    }

    double smooth_value(const Eigen::MatrixXcd& F, double mu, Eigen::MatrixXcd* grad) const {
        auto rs = residuals(F);
        double v = 0.0;
        std::vector<Eigen::VectorXcd> g(rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            double s = std::sqrt(rs[i].squaredNorm() + mu * mu);
            v += s - mu;
            g[i] = rs[i] / s;
        }
        if (grad) {
            grad->setZero();
            grad->col(0) -= g[0];
            for (int nn = 1; nn < N; ++nn) {
                grad->col(nn) += g[static_cast<std::size_t>(nn)];
                grad->col(nn - 1) -= A.adjoint() * g[static_cast<std::size_t>(nn)];
            }
            grad->col(N - 1) += A.adjoint() * g[static_cast<std::size_t>(N)];
        }
        return v;
    }
};

}  // namespace

ArensResult arens_quotient_norm(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x, int N,
                                double gap_tol, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("arens_quotient_norm: N >= 1 required");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < 1.0 - 1e-12)
        throw std::invalid_argument("arens_quotient_norm: sigma_min(A) >= 1 required (rescale A by 1/c first)");

    const long d = A.rows();
    ArensObjective obj{A, x, N};

    // Explicit dual-feasible point chained through (A*)^{-1}: the adjoint
    // stationarity conditions are u0 = -A* u1, u_m = A* u_{m+1} for
    // 1 <= m <= N-2, u_{N-1} = -A* u_N (for N = 1 they collapse to
    // u0 = A* u1); sigma_min(A) >= 1 keeps every ||u_j|| <= 1.
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A.adjoint());
    std::vector<Eigen::VectorXcd> u(static_cast<std::size_t>(N) + 1);
    double xn = x.norm();
    if (xn == 0.0) {
        ArensResult r;
        r.witness = Eigen::MatrixXcd::Zero(d, N);
        return r;
    }
    u[0] = x / xn;
    if (N == 1) {
        u[1] = lu.solve(u[0]);
    } else {
        u[1] = -lu.solve(u[0]);
        for (int j = 1; j <= N - 2; ++j)
            u[static_cast<std::size_t>(j + 1)] = lu.solve(u[static_cast<std::size_t>(j)]);
        u[static_cast<std::size_t>(N)] = -lu.solve(u[static_cast<std::size_t>(N - 1)]);
    }
    double umax = 0.0;
    for (const auto& uj : u) umax = std::max(umax, uj.norm());
    double scale = umax > 1.0 ? 1.0 / umax : 1.0;
    double dual = scale * std::real(u[0].dot(x));  // Eigen dot conjugates the first factor

    // primal: FISTA with smoothing continuation from a seeded random start
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd F(d, N);
    for (long i = 0; i < d; ++i)
        for (int nn = 0; nn < N; ++nn) F(i, nn) = 0.1 * xn * cplx(gauss(rng), gauss(rng));

    double Anorm = svd.singularValues()(0);
    double best = obj.value(F);
    Eigen::MatrixXcd bestF = F;
    Eigen::MatrixXcd grad(d, N), Y = F, Fprev = F;
    int iters = 0;
    double gap_scale = std::max(1.0, xn);
    for (double mu = 0.1 * xn; mu > 1e-14 * gap_scale; mu *= 0.2) {
        double L = 4.0 * (1.0 + Anorm * Anorm) / mu;
        double t = 1.0;
        Y = F;
        for (int it = 0; it < 4000; ++it) {
            ++iters;
            obj.smooth_value(Y, mu, &grad);
            Eigen::MatrixXcd Fn = Y - grad / L;
            double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            Y = Fn + ((t - 1.0) / tn) * (Fn - F);
            F = Fn;
            t = tn;
            if (it % 25 == 0) {
                double v = obj.value(F);
                if (v < best) {
                    best = v;
                    bestF = F;
                }
                if (best - dual <= gap_tol * gap_scale) break;
            }
        }
        double v = obj.value(F);
        if (v < best) {
            best = v;
            bestF = F;
        }
        if (best - dual <= gap_tol * gap_scale) break;
    }
    if (best - dual > gap_tol * gap_scale)
        throw std::runtime_error("arens_quotient_norm: solver failed to reach the requested duality gap");

    ArensResult r;
    r.value = best;
    r.dual_bound = dual;
    r.gap = best - dual;
    r.witness = bestF;
    r.iterations = iters;
    return r;
}

// ---------------------------------------------------------------------------
// Cayley transform and the dissipative outer extension pipeline
// ---------------------------------------------------------------------------

Operator cayley(const Operator& A) {
    require(A.kind == Operator::Kind::Dense, "cayley: Dense operator required (use CayleyRep otherwise)");
    long n = A.dense.rows();
    double d = min_eig_distance(A.dense, cplx(-1.0, 0.0));
    if (d <= 1e-10 * std::max(1.0, A.dense.norm()))
        throw std::domain_error("cayley: I + A singular (-1 is an eigenvalue of A)");
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd C = (I - A.dense) * (I + A.dense).partialPivLu().solve(I);
    return Operator::dense_op(C);
}

Operator inverse_cayley(const Operator& C) { return cayley(C); }

std::pair<SeqVector, SeqVector> CayleyRep::domain_pair(const SeqVector& zeta) const {
    SeqVector cz = apply(C, zeta);
    return {zeta + cz, zeta - cz};
}

std::pair<SeqVector, SeqVector> DissipativeExtension::domain_pair(const SeqVector& zeta) const {
    // z = (I + G) zeta,  B z = (I - G) zeta  (G is the extension of cayley(A))
    SeqVector gz = G.apply_B(zeta);
    return {zeta + gz, zeta - gz};
}

SeqVector DissipativeExtension::embed(const SeqVector& x) const { return G.embed(x); }

DissipativeExtension dissipative_outer_extension(const CayleyRep& A) {
    CertifiedValue lbc = lower_bound_constant(A.C);
    require(lbc.lower() >= 1.0 - 1e-12,
            "dissipative_outer_extension: the Cayley transform must satisfy ||Cx|| >= ||x||");
    DissipativeExtension e;
    e.G = polar_extension(A.C, 1.0, /*minimal=*/true);
    e.trivial = false;
    return e;
}

DissipativeExtension dissipative_outer_extension(const Operator& dense_A) {
    require(dense_A.kind == Operator::Kind::Dense, "dissipative_outer_extension: Dense operator expected");
    const Eigen::MatrixXcd& M = dense_A.dense;
    // dissipativity: Re<Ax,x> <= 0 for all x, i.e. A + A* negative semidefinite
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M + M.adjoint());
    if (es.eigenvalues().maxCoeff() > 1e-10 * std::max(1.0, M.norm()))
        throw std::domain_error("dissipative_outer_extension: A is not dissipative");
    Operator C = cayley(dense_A);  // throws when -1 is an eigenvalue
    CertifiedValue lbc = lower_bound_constant(C);
    require(lbc.lower() >= 1.0 - 1e-9, "dissipative_outer_extension: ||Cx|| >= ||x|| failed");
    // C is invertible (finite dimension, bounded below), so the minimal
    // extension is trivial and B = A on X itself.
    DissipativeExtension e;
    e.trivial = true;
    e.A_dense = M;
    e.G = minimal_invertible_extension(C, ComplementDesc::orthocomplement(), 1.0, NormP::Two);
    return e;
}

}  // namespace opext::extend
