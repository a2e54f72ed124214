// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "opext/operator.hpp"
#include "opext/resolvent.hpp"

namespace opext::extend {

/// Complement Y with X = ran A (+) Y: an explicit basis, or the Hilbert
/// orthocomplement tag.
struct ComplementDesc {
    bool ortho = true;
    std::vector<SeqVector> basis;

    static ComplementDesc orthocomplement() { return {true, {}}; }
    static ComplementDesc span(std::vector<SeqVector> b) { return {false, std::move(b)}; }
};

struct AmbientDesc {
    enum class Kind { SameSpace, PairSpace, TowerSpace };
    Kind kind = Kind::SameSpace;
    NormP p = NormP::Two;
    IndexSet base = IndexSet::naturals();
    std::string str() const;
};

/// A minimal invertible extension record: the extended operator B with its
/// explicit inverse, the embedding of X into the ambient space, and the
/// lower-bound constant c used.  Vectors of the ambient space are
/// multi-block SeqVectors: block 0 = X, blocks k >= 1 = the k-th copy of Y
/// (tower) or the second factor (pair).
struct ExtensionBundle {
    enum class Kind { TrivialDense, MinimalShift, PolarDense, PolarShift };

    Kind kind = Kind::TrivialDense;
    double c = 1.0;
    bool minimal = false;
    AmbientDesc ambient;
    Operator A;

    // dense payloads (TrivialDense / PolarDense)
    Eigen::MatrixXcd U, P, Ainv, Btilde, BtildeInv;

    SeqVector embed(const SeqVector& x) const;
    SeqVector apply_B(const SeqVector& z) const;
    SeqVector apply_Binv(const SeqVector& z) const;
    /// Resolvent of B per the explicit series/block formulas; |lambda| must
    /// lie strictly outside the certified enclosure of sigma(A).
    ResolventResult apply_resolvent_B(cplx lambda, const SeqVector& z, double tol) const;
    CertifiedValue norm_Binv() const;

    /// Graded structure Z = X (+) sum_k Z_k used by the universality map.
    /// grade_dim(k) = dimension of the sampled part of Z_k.
    int grade_dim(int k) const;
    SeqVector grade_basis(int k, int j) const;

    /// For shift bundles: the natural identification of the ambient space
    /// with l_p(Z) (lattice vectors <-> block vectors).
    SeqVector from_lattice(const SeqVector& bilateral) const;
    SeqVector to_lattice(const SeqVector& z) const;
};

/// Prop-style minimal invertible extension of a bounded-below operator with
/// complemented range: B(x, y1, y2, ...) = (Ax + c y1, c y2, ...) on
/// Z = X (+) l_p(Y).  Supported inputs: invertible Dense (trivial branch,
/// Y = {0}) and unilateral WeightedShift with Y = span{e0}.
ExtensionBundle minimal_invertible_extension(const Operator& A, const ComplementDesc& comp, double c,
                                             NormP p);

/// Polar extension Btilde = [[A, c(I-UU*)], [0, cU*]] on X x X with explicit
/// inverse [[P^{-1}U*, 0], [c^{-1}(I-UU*), c^{-1}U]]; minimal = restriction
/// to Z = X (+) sum_k Z_k, Z_k = ran(U^k (I-UU*)).
ExtensionBundle polar_extension(const Operator& A, double c, bool minimal);

/// Abstract view of an extension used by the universality map (allows
/// synthetic modifications in tests).
struct BundleView {
    double c = 1.0;
    std::function<SeqVector(const SeqVector&)> apply_B;
    std::function<SeqVector(const SeqVector&)> apply_Binv;
    std::function<SeqVector(const SeqVector&)> embed;
    std::function<int(int)> grade_dim;
    std::function<SeqVector(int, int)> grade_basis;
};

BundleView view(const ExtensionBundle& b);

struct UniversalityResult {
    std::function<SeqVector(const SeqVector&, int)> pi;  // pi on a vector of known grade (-1 = X)
    bool is_unitary = false;
    double max_deviation = 0.0;  // sup over samples of ||C(pi z) - pi(B z)||
};

/// Builds the contraction pi: Z -> W of the minimal bundle into another
/// extension, pi = C^{-(k+1)} B^{k+1} on Z_k and identity on X; verifies the
/// intertwining C o pi = pi o B on graded samples.
UniversalityResult universality_map(const BundleView& minimal_bundle, const BundleView& other,
                                    int max_grade, int samples_per_grade);

struct ArensResult {
    double value = 0.0;       // the computed truncated quotient norm
    double dual_bound = 0.0;  // certified lower bound from an explicit dual point
    double gap = 0.0;
    Eigen::MatrixXcd witness;  // d x N minimizer
    int iterations = 0;
};

/// Truncated quotient-norm program of the isometric-embedding construction:
/// min over f of ||x - f_0|| + sum ||f_n - A f_{n-1}|| + ||A f_{N-1}||,
/// certified by an explicit dual-feasible point.  Requires sigma_min(A) >= 1.
ArensResult arens_quotient_norm(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x, int N,
                                double gap_tol = 1e-8, std::uint64_t seed = 1);

/// Cayley transform C = (I - A)(I + A)^{-1} for Dense A with -1 not an
/// eigenvalue; inverse_cayley is the same involution.
Operator cayley(const Operator& A);
Operator inverse_cayley(const Operator& C);

/// An operator given through its Cayley transform: D(A) = ran(I + C) and
/// A (I + C) zeta = (I - C) zeta.  Represents the unbounded case where C is
/// a shift.
struct CayleyRep {
    Operator C;
    /// (z, A z) with z = (I + C) zeta
    std::pair<SeqVector, SeqVector> domain_pair(const SeqVector& zeta) const;
};

/// Dissipative outer extension (Cayley pipeline): B = (I - G)(I + G)^{-1}
/// where G is the minimal polar extension of C = cayley(A).
struct DissipativeExtension {
    ExtensionBundle G;  // invertible extension of the Cayley transform
    bool trivial = false;  // C invertible => B = A on X itself
    Eigen::MatrixXcd A_dense;  // dense branch payload

    /// (z, B z) with z = (I + G) zeta on ambient block vectors
    std::pair<SeqVector, SeqVector> domain_pair(const SeqVector& zeta) const;
    SeqVector embed(const SeqVector& x) const;
};

DissipativeExtension dissipative_outer_extension(const CayleyRep& A);
DissipativeExtension dissipative_outer_extension(const Operator& dense_A);

}  // namespace opext::extend
