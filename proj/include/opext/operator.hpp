// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "opext/certified.hpp"
#include "opext/seqvec.hpp"
#include "opext/spectrum.hpp"
#include "opext/weightseq.hpp"

namespace opext {

/// The single operator representation every construction consumes and
/// produces.  WeightedShift maps e_n -> w_n e_{n+1}; AffineShift(base, l)
/// represents l*I - base.
struct Operator {
    enum class Kind { Dense, WeightedShift, Diagonal, DirectSum, Block2x2, AffineShift, Scaled };

    Kind kind = Kind::Dense;
    Eigen::MatrixXcd dense;        // Dense
    WeightSeq weights;             // WeightedShift / Diagonal
    IndexSet iset;                 // WeightedShift / Diagonal
    std::vector<Operator> parts;   // DirectSum (n), Block2x2 (4 row-major), AffineShift/Scaled (1)
    cplx scalar = 0.0;             // AffineShift lambda / Scaled factor

    static Operator dense_op(Eigen::MatrixXcd m);
    static Operator weighted_shift(WeightSeq w, IndexSet is);
    static Operator diagonal(WeightSeq w, IndexSet is);
    static Operator direct_sum(std::vector<Operator> summands);
    static Operator block2x2(Operator a11, Operator a12, Operator a21, Operator a22);
    static Operator affine_shift(Operator base, cplx lambda);
    static Operator scaled(Operator base, cplx factor);

    bool is_simple() const {
        return kind == Kind::Dense || kind == Kind::WeightedShift || kind == Kind::Diagonal;
    }
    const char* kind_name() const;
};

/// Exact image of a finitely supported vector.  Throws on index-set mismatch.
SeqVector apply(const Operator& op, const SeqVector& v);

/// Largest certified c with ||op x|| >= c ||x||: smallest singular value for
/// Dense, inf of the weights for shifts/diagonals (exact).
CertifiedValue lower_bound_constant(const Operator& op);

/// Operator norm with certified enclosure.
CertifiedValue operator_norm(const Operator& op);

/// Eigenvalue list of a Dense operator (each within 1e-10 of a true one for
/// the supported sizes).
SpectrumDesc spectrum_dense(const Operator& op);

/// Polar decomposition op = U.P with P = (op* op)^{1/2} and U a partial
/// isometry vanishing on ker P.  For a WeightedShift the result is exact:
/// U = unweighted shift, P = Diagonal(w).
std::pair<Operator, Operator> polar_decompose(const Operator& op);

/// Certified spectral enclosure used to gate shift resolvents: an annulus
/// (bilateral) or disk (unilateral) containing the spectrum.
SpectrumDesc shift_spectral_enclosure(const WeightSeq& w, const IndexSet& is);

/// Dense matrix form for operators on finite-dimensional spaces.
Eigen::MatrixXcd to_dense_matrix(const Operator& op);

}  // namespace opext
